#pragma once

#include "pita/model.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace pita {

/// Shanks transform of three consecutive terms,
///   (s0 s2 - s1^2) / (s0 + s2 - 2 s1).
/// Exact on sequences L + a r^n.
///
/// Throws DegenerateDenominatorError when the second difference is below
/// guard * max(1, |s0|, |s1|, |s2|).
double shanks(double s0, double s1, double s2, double guard = 1e-12);

/// Triangular table of Wynn's epsilon recursion
///   e_{-1}^{(n)} = 0,  e_0^{(n)} = S_n,
///   e_{c+1}^{(n)} = e_{c-1}^{(n+1)} + 1 / (e_c^{(n+1)} - e_c^{(n)}).
///
/// Column c holds (len - c) entries. When a difference is within
/// guard * (1 + |e_c^{(n)}|) of zero the entry copies e_{c-1}^{(n+1)} and is
/// flagged. A flagged entry stands in for an infinite one, so the column after
/// it uses a zero increment wherever a flagged neighbour is involved; converged
/// columns then propagate their limit instead of blowing up.
/// Only even columns are extrapolants; odd columns stay internal.
class EpsilonTable {
public:
    EpsilonTable(std::span<const double> sequence, double guard);

    /// Number of columns, i.e. the input length.
    [[nodiscard]] std::size_t depth() const noexcept { return columns_.size(); }
    [[nodiscard]] std::size_t column_length(std::size_t c) const { return columns_.at(c).size(); }

    /// e_k^{(n)} for even k. Throws InvalidArgument for odd k or out-of-range n.
    [[nodiscard]] double extrapolant(std::size_t k, std::size_t n) const;

    /// Whether e_c^{(n)} was produced under the small-denominator guard.
    [[nodiscard]] bool guarded(std::size_t c, std::size_t n) const;

    /// True if any entry of the table hit the guard.
    [[nodiscard]] bool any_guarded() const noexcept;

private:
    std::vector<std::vector<double>> columns_;
    std::vector<std::vector<bool>> guarded_;
};

EpsilonTable epsilon_table(std::span<const double> sequence, double guard = 1e-12);

/// Which reading of the auxiliary alternating series to use.
enum class AuxForm {
    /// S_b0 + (-1)^n * n / (n+1)^q. The summand does not depend on the
    /// summation index, so the sum collapses.
    literal,
    /// S_b0 + (-1)^n * sum_{j=1..n} 1 / (j+1)^q.
    summed,
    /// Constant S_b0. Coupling with it is a pure translation.
    off,
};

std::string_view to_string(AuxForm form) noexcept;
AuxForm parse_aux_form(std::string_view text);

struct AuxSeriesParams {
    double s_b0 = 0.0;
    double q = 1.0;
    AuxForm form = AuxForm::literal;
};

/// Parameters of one extrapolation: order k (even), starting index n,
/// scaling rho and an optional auxiliary series.
struct AccelSpec {
    int k = 4;
    int n = 2;
    double rho = 1.0;
    std::optional<AuxSeriesParams> aux;
    double denom_guard = 1e-12;
};

/// Throws InvalidArgument on odd/negative k, negative n, rho <= 0 or q <= 0.
void validate_spec(const AccelSpec& spec);

/// n + k + 1: the terms S_n .. S_{n+k} consumed by an order-k extrapolation.
/// Throws InvalidArgument for odd or negative k.
std::size_t terms_needed(int k, int n);

/// e_k^{(n)} of the epsilon table on `sequence`.
///
/// Throws InsufficientTermsError when fewer than n + k + 1 terms are given.
double s_epsilon(const AccelSpec& spec, std::span<const double> sequence);

double aux_series_term(const AuxSeriesParams& params, int n);

/// Terms 0 .. length-1 of the auxiliary series.
std::vector<double> aux_series(const AuxSeriesParams& params, std::size_t length);

/// Coupled extrapolation: with C_i = rho * omega_i + aux_i, returns
///   (s_epsilon(C) - s_epsilon(aux)) / rho.
/// Requires spec.aux.
double accelerate_with_aux(const AccelSpec& spec, std::span<const double> omega);

/// Componentwise extrapolation of a sequence of vectors. Uses
/// accelerate_with_aux when spec.aux is set, plain s_epsilon otherwise.
StateVector vector_accelerate(const AccelSpec& spec, std::span<const StateVector> sequence);

} // namespace pita
