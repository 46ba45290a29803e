#include "npvi/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "npvi/error.hpp"

namespace npvi {

std::string format_double(double value) {
  char buf[64];
  const auto res =
      std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string mixture_to_json(const MixtureApproximation& q) {
  std::string out = "{\"means\": [";
  for (Index n = 0; n < q.size(); ++n) {
    out += n ? ", [" : "[";
    for (Index i = 0; i < q.dimension(); ++i) {
      if (i) out += ", ";
      out += format_double(q.means()(n, i));
    }
    out += "]";
  }
  out += "], \"sigmas\": [";
  for (Index n = 0; n < q.size(); ++n) {
    if (n) out += ", ";
    out += format_double(q.sigma(n));
  }
  out += "]}\n";
  return out;
}

MixtureApproximation mixture_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("mixture JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("means") || !doc.contains("sigmas"))
    throw InputError("mixture JSON needs \"means\" and \"sigmas\"");
  const auto& means = doc.at("means");
  const auto& sigmas = doc.at("sigmas");
  if (!means.is_array() || means.empty() || !sigmas.is_array())
    throw InputError("mixture JSON: means and sigmas must be arrays");
  const Index count = static_cast<Index>(means.size());
  const Index dim = static_cast<Index>(means.at(0).size());
  Matrix m(count, dim);
  Vector s(static_cast<Index>(sigmas.size()));
  try {
    for (Index n = 0; n < count; ++n) {
      const auto& row = means.at(n);
      if (static_cast<Index>(row.size()) != dim)
        throw InputError("mixture JSON: ragged means");
      for (Index i = 0; i < dim; ++i) m(n, i) = row.at(i).get<double>();
    }
    for (Index n = 0; n < s.size(); ++n) s(n) = sigmas.at(n).get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("mixture JSON: ") + e.what());
  }
  try {
    return MixtureApproximation(std::move(m), std::move(s));
  } catch (const ConfigError& e) {
    throw InputError(std::string("mixture JSON: ") + e.what());
  }
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::string& contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write " + tmp.string());
    out << contents;
    if (!out) throw InputError("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move " + tmp.string() + " into place: " + ec.message());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string samples_to_csv(const std::vector<Vector>& samples) {
  std::string out;
  const Index dim = samples.empty() ? 0 : samples.front().size();
  for (Index i = 0; i < dim; ++i) {
    if (i) out += ',';
    out += "theta" + std::to_string(i + 1);
  }
  out += '\n';
  for (const auto& s : samples) {
    for (Index i = 0; i < s.size(); ++i) {
      if (i) out += ',';
      out += format_double(s(i));
    }
    out += '\n';
  }
  return out;
}

}  // namespace npvi
