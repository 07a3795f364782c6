#include "bellmetric/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace bellmetric {
namespace {

std::vector<int> read_dims(const Json& j) {
  if (!j.contains("factor_dims") || !j.at("factor_dims").is_array()) {
    throw ParseError("missing \"factor_dims\" array");
  }
  std::vector<int> dims;
  for (const auto& d : j.at("factor_dims")) {
    if (!d.is_number_integer() || d.get<long long>() < 1) {
      throw ParseError("\"factor_dims\" entries must be positive integers");
    }
    dims.push_back(d.get<int>());
  }
  if (dims.empty()) throw ParseError("\"factor_dims\" is empty");
  return dims;
}

std::vector<double> read_reals(const Json& j, const char* key, std::size_t expected) {
  if (!j.contains(key) || !j.at(key).is_array()) {
    throw ParseError(std::string("missing \"") + key + "\" array");
  }
  const Json& arr = j.at(key);
  if (arr.size() != expected) {
    throw ParseError(std::string("\"") + key + "\" has " + std::to_string(arr.size()) +
                     " entries, expected " + std::to_string(expected));
  }
  std::vector<double> out;
  out.reserve(expected);
  for (const auto& v : arr) {
    if (!v.is_number()) throw ParseError(std::string("\"") + key + "\" holds a non-number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ParseError(std::string("\"") + key + "\" holds a non-finite value");
    out.push_back(x);
  }
  return out;
}

long long product(const std::vector<int>& dims) {
  long long p = 1;
  for (int d : dims) p *= d;
  return p;
}

}  // namespace

Json operator_to_json(const Matrix& m, const std::vector<int>& factor_dims) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  Json j;
  j["dim"] = m.rows();
  j["factor_dims"] = factor_dims;
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

Matrix operator_from_json(const Json& j, std::vector<int>& factor_dims) {
  if (!j.is_object()) throw ParseError("operator must be a JSON object");
  if (!j.contains("dim") || !j.at("dim").is_number_integer() || j.at("dim").get<long long>() < 1) {
    throw ParseError("missing or invalid \"dim\"");
  }
  const int n = j.at("dim").get<int>();
  factor_dims = read_dims(j);
  if (product(factor_dims) != n) {
    throw ParseError("\"factor_dims\" product does not equal \"dim\" = " + std::to_string(n));
  }
  const std::size_t count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::vector<double> re = read_reals(j, "re", count);
  const std::vector<double> im = read_reals(j, "im", count);
  Matrix m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      const std::size_t k = static_cast<std::size_t>(r) * n + c;
      m(r, c) = Complex(re[k], im[k]);
    }
  return m;
}

Json to_json(const DensityOperator& d) {
  return operator_to_json(d.matrix(), {d.dims().d1, d.dims().d2});
}

DensityOperator density_from_json(const Json& j) {
  std::vector<int> dims;
  Matrix m = operator_from_json(j, dims);
  if (dims.size() > 2) throw ParseError("density operator must declare one or two factor dims");
  const FactorDims fd = dims.size() == 2 ? FactorDims{dims[0], dims[1]} : FactorDims{dims[0], 1};
  return DensityOperator(std::move(m), fd);
}

Json to_json(const PureVector& x) {
  Json re = Json::array();
  Json im = Json::array();
  for (Eigen::Index k = 0; k < x.amplitudes().size(); ++k) {
    re.push_back(x.amplitudes()(k).real());
    im.push_back(x.amplitudes()(k).imag());
  }
  Json j;
  j["factor_dims"] = x.factor_dims();
  j["re"] = std::move(re);
  j["im"] = std::move(im);
  return j;
}

PureVector pure_vector_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("pure vector must be a JSON object");
  std::vector<int> dims = read_dims(j);
  const auto n = static_cast<std::size_t>(product(dims));
  const std::vector<double> re = read_reals(j, "re", n);
  const std::vector<double> im = read_reals(j, "im", n);
  Vector v(static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n; ++k) v(static_cast<Eigen::Index>(k)) = Complex(re[k], im[k]);
  return PureVector(std::move(dims), std::move(v));
}

Json to_json(const CorrelationSettings& s) {
  Json j;
  j["A1"] = operator_to_json(s.a1.matrix(), {s.a1.dim()});
  j["A2"] = operator_to_json(s.a2.matrix(), {s.a2.dim()});
  j["B1"] = operator_to_json(s.b1.matrix(), {s.b1.dim()});
  j["B2"] = operator_to_json(s.b2.matrix(), {s.b2.dim()});
  return j;
}

CorrelationSettings settings_from_json(const Json& j) {
  auto read = [&](const char* key) {
    if (!j.contains(key)) throw ParseError(std::string("settings: missing \"") + key + "\"");
    std::vector<int> dims;
    return DichotomicObservable(operator_from_json(j.at(key), dims));
  };
  return {read("A1"), read("A2"), read("B1"), read("B2")};
}

Json to_json(const BellBoundCertificate& c) {
  Json j;
  j["gamma_lower"] = c.gamma_lower;
  j["beta"] = c.beta();
  j["settings"] = to_json(c.settings);
  j["iterations"] = c.iterations;
  j["restarts_used"] = c.restarts_used;
  j["converged"] = c.converged;
  j["seed"] = c.seed;
  j["method"] = c.method;
  j["nontrivial"] = {c.settings.a1.nontrivial(), c.settings.a2.nontrivial(),
                     c.settings.b1.nontrivial(), c.settings.b2.nontrivial()};
  return j;
}

StateFile parse_state(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("state document must be a JSON object");
  if (j.contains("dim")) return density_from_json(j);
  return pure_vector_from_json(j);
}

std::string dump_state(const StateFile& state) {
  return std::visit([](const auto& s) { return dump(to_json(s)); }, state);
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace bellmetric
