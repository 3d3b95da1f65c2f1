#ifndef DEVDEC_IO_HPP
#define DEVDEC_IO_HPP

#include <stdexcept>
#include <string>

#include "json.hpp"

#include "devdec/decompose.hpp"
#include "devdec/physics.hpp"
#include "devdec/tensor.hpp"

namespace devdec {

/// Malformed or unreadable input. The message names the file, line/column
/// or the offending JSON field.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Json = nlohmann::json;

// Tensor: {"order": n, "components": [3^n numbers, row-major]}
Json to_json(const Tensor& t);
Tensor tensor_from_json(const Json& j, const std::string& where = "tensor");

// {"order": n, "parts": [{"s", "J", "deviator", "embedded"}, ...]}
Json to_json(const Decomposition& d);
Decomposition decomposition_from_json(const Json& j);

Json to_json(const VerifyReport& r, double tolerance);
Json to_json(const StiffnessDeviators& d);
Json to_json(const CouplingDeviators& d);
Json to_json(const CouplingCoefficientDiff& d);

// Voigt: JSON array of 6 rows of 6 numbers, or 6 lines of 6 numbers.
Json to_json(const VoigtMatrix& m);
VoigtMatrix voigt_from_json(const Json& j);
VoigtMatrix voigt_from_text(const std::string& text, const std::string& source);
/// Chooses JSON when the first non-blank character is '[', text otherwise.
VoigtMatrix parse_voigt(const std::string& text, const std::string& source);

/// {"order3": [...], "order4": [...]}, one {"s", "J", "term", "coefficient"}
/// entry per closed-form term, from the frozen table.
Json closed_form_coefficients_json();

Json parse_json(const std::string& text, const std::string& source);
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace devdec

#endif  // DEVDEC_IO_HPP
