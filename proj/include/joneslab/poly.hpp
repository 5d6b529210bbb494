#pragma once

#include <gmpxx.h>

#include <map>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace joneslab {

using BigInt = mpz_class;

// Integer Laurent polynomial in A, stored densely from the lowest exponent.
// Always trimmed: either empty or first and last coefficients nonzero.
class LaurentPoly {
public:
    LaurentPoly() = default;
    LaurentPoly(long c);  // constant
    static LaurentPoly monomial(int exp, const BigInt& coeff = 1);
    static LaurentPoly from_terms(const std::vector<std::pair<int, long>>& terms);
    static LaurentPoly from_map(const std::map<int, BigInt>& terms);
    static LaurentPoly delta();  // -A^2 - A^-2

    bool is_zero() const { return c_.empty(); }
    std::optional<int> max_deg() const;
    std::optional<int> min_deg() const;
    BigInt coeff(int exp) const;
    std::map<int, BigInt> terms() const;
    std::size_t term_count() const;

    LaurentPoly shifted(int k) const;  // times A^k
    LaurentPoly inverted() const;      // p(A^-1)
    LaurentPoly pow(unsigned k) const;

    // this += coeff * A^shift * p
    void add_scaled(const LaurentPoly& p, int shift = 0, long coeff = 1);
    void mul_delta();  // this *= delta

    LaurentPoly& operator+=(const LaurentPoly& o) { add_scaled(o); return *this; }
    LaurentPoly& operator-=(const LaurentPoly& o) { add_scaled(o, 0, -1); return *this; }
    LaurentPoly& operator*=(const LaurentPoly& o);
    LaurentPoly operator-() const;

    friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }
    friend LaurentPoly operator-(LaurentPoly a, const LaurentPoly& b) { return a -= b; }
    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b);
    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
        return a.low_ == b.low_ && a.c_ == b.c_;
    }

    std::string to_string() const;  // e.g. "-A^5 - A^-3 + A^-7"
    nlohmann::json to_json() const;  // [[exp, coeff], ...] descending
    static LaurentPoly from_json(const nlohmann::json& j);

private:
    void trim();
    int low_ = 0;
    std::vector<BigInt> c_;
};

std::optional<int> max_deg(const LaurentPoly& p);
LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q);

// Exponent in units of 1/4.
struct Quarter {
    long v = 0;
    bool operator==(const Quarter&) const = default;
    auto operator<=>(const Quarter&) const = default;
    std::string to_string() const;
};

// The q = A^-4 view. Keys are q-exponents in quarter units.
class QSeries {
public:
    QSeries() = default;
    explicit QSeries(std::map<long, BigInt> t) : terms_(std::move(t)) {}

    const std::map<long, BigInt>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::optional<Quarter> min_deg() const;
    std::optional<Quarter> max_deg() const;
    BigInt coeff(Quarter e) const;
    bool integral() const;  // all exponents integers

    std::string to_string() const;  // ascending, e.g. "q - q^2 + q^(7/2)"
    nlohmann::json to_json() const;  // [[quarter_exp, coeff], ...] ascending

    friend bool operator==(const QSeries&, const QSeries&) = default;

private:
    std::map<long, BigInt> terms_;
};

QSeries to_q(const LaurentPoly& p);

nlohmann::json bigint_json(const BigInt& x);
BigInt bigint_from_json(const nlohmann::json& j);

}  // namespace joneslab
