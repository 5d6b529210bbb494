#pragma once

#include <map>
#include <mutex>
#include <optional>
#include <vector>

#include "joneslab/diagram.hpp"
#include "joneslab/options.hpp"
#include "joneslab/poly.hpp"

namespace joneslab {

// S_n(D) = sum_k coeffs[k] D^k.
struct ChebyshevExpansion {
    int n = 0;
    std::map<int, long> coeffs;
};

ChebyshevExpansion chebyshev(int n);

int max_bracket_degree_bound(const Diagram& d);  // M(D) = c + 2|s_A| - 2
int chi_A(const Diagram& d);                     // |s_A| - c

struct DegreeReport {
    int m = 0;                       // color
    std::optional<int> dA_star;      // max A-degree of <S_{m-1}(D)>
    std::optional<Quarter> d;        // min q-degree of J(m, q)
    Quarter h;                       // lower bound h_m(D)
    int M_Dn = 0;                    // M(D^{m-1})
    int writhe = 0;
    bool adequate = false;
    nlohmann::json to_json() const;
};

struct TailReport {
    // Coefficients are read from e_m J(m, q) with e_m = (-1)^{(m-1)(|s_A| + w + 1)}.
    // betas[i-1] = coefficient of q^{h_{i+2} + i - 1} in J(i+2, q).
    std::vector<BigInt> betas;
    // leading[i-2] = coefficient of q^{d(i) + i - 2} in J(i, q), i >= 2.
    std::vector<BigInt> leading;
    int stabilized_up_to = 0;  // betas confirmed by at least two colors
    bool adequate = false;
    bool vanishes() const;     // all betas zero
    nlohmann::json to_json() const;
};

// Colored Jones data of one diagram, caching the cable brackets.
class JonesCalculator {
public:
    explicit JonesCalculator(Diagram d, EngineOptions opt = {});

    const Diagram& diagram() const { return d_; }
    int M(int k) const;  // M(D^k) from the closed form

    // Normalized bracket of the cable with copies[i] strands of component i,
    // not all zero.
    LaurentPoly cable_bracket(const std::vector<int>& copies);
    // Normalized <D^k>, k >= 1.
    LaurentPoly cable_bracket(int k);
    // Computes every cable that <S_n(D)> needs for the listed n, concurrently
    // when threads > 1.
    void prefetch(const std::vector<int>& ns);

    // delta * <S_n(D)>, with S_n applied to each component: the sum over
    // multi-indices k of prod_i c_{n,k_i} delta <D^k>. Always a Laurent
    // polynomial since the empty cable contributes its unreduced value 1.
    LaurentPoly bracket_S_times_delta(int n);
    // <S_n(D)> itself; throws NotDivisible when it has a 1/delta part
    // (even n, where the empty cable enters with a nonzero coefficient).
    LaurentPoly bracket_S(int n);
    // Leading A-degree of <S_n(D)> as a series in A^-1.
    std::optional<int> bracket_S_degree(int n);
    LaurentPoly G(int m);  // G_D(m, A)
    QSeries colored_jones(int m) { return to_q(G(m)); }
    DegreeReport degree_report(int m);
    TailReport tail(int count, int max_color);

private:
    std::vector<std::pair<std::vector<int>, long>> expansion(int n) const;

    Diagram d_;
    EngineOptions opt_;
    int s_A_;
    int components_;
    std::mutex mu_;
    std::map<std::vector<int>, LaurentPoly> cables_;
};

LaurentPoly bracket_S(const Diagram& d, int n, const EngineOptions& opt = {});
LaurentPoly bracket_S_times_delta(const Diagram& d, int n, const EngineOptions& opt = {});
QSeries colored_jones(const Diagram& d, int m, const EngineOptions& opt = {});
DegreeReport degree_report(const Diagram& d, int m, const EngineOptions& opt = {});
TailReport tail(const Diagram& d, int count, int max_color, const EngineOptions& opt = {});

}  // namespace joneslab
