"""Nonparametric variational inference with Gaussian mixtures."""

from ._npvi import (
    CapabilityError,
    ConfigError,
    InputError,
    Mixture,
    Model,
    NumericalError,
    callable_model,
    elbo_l1,
    elbo_l2,
    fit,
    gaussian_model,
    hmc_sample,
    laplace_diagonal,
    map_estimate,
    run_cli,
    t_mixture_model,
)

__all__ = [
    "CapabilityError",
    "ConfigError",
    "InputError",
    "Mixture",
    "Model",
    "NumericalError",
    "callable_model",
    "elbo_l1",
    "elbo_l2",
    "fit",
    "gaussian_model",
    "hmc_sample",
    "laplace_diagonal",
    "map_estimate",
    "run_cli",
    "t_mixture_model",
]
