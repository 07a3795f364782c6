#pragma once

#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "bellmetric/bell.hpp"
#include "bellmetric/operator.hpp"

namespace bellmetric {

using Json = nlohmann::ordered_json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// {"dim": n, "factor_dims": [...], "re": [...], "im": [...]}, row-major.
Json operator_to_json(const Matrix& m, const std::vector<int>& factor_dims);
/// Returns the matrix and writes the declared factor dims to `factor_dims`.
Matrix operator_from_json(const Json& j, std::vector<int>& factor_dims);

Json to_json(const DensityOperator& d);
DensityOperator density_from_json(const Json& j);

/// {"factor_dims": [...], "re": [...], "im": [...]}
Json to_json(const PureVector& x);
PureVector pure_vector_from_json(const Json& j);

/// Four operator blobs keyed A1, A2, B1, B2.
Json to_json(const CorrelationSettings& s);
CorrelationSettings settings_from_json(const Json& j);

Json to_json(const BellBoundCertificate& c);

using StateFile = std::variant<DensityOperator, PureVector>;

/// A state document is a pure vector when it has no "dim" key.
StateFile parse_state(const std::string& text);
std::string dump_state(const StateFile& state);

/// printf("%.17g"): 17 significant digits, lossless for doubles.
std::string format_double(double x);

std::string dump(const Json& j);

}  // namespace bellmetric
