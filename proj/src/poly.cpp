#include "joneslab/poly.hpp"

#include <algorithm>
#include <numeric>

#include "joneslab/errors.hpp"

namespace joneslab {

LaurentPoly::LaurentPoly(long c) {
    if (c != 0) c_.emplace_back(c);
}

LaurentPoly LaurentPoly::monomial(int exp, const BigInt& coeff) {
    LaurentPoly p;
    if (coeff != 0) {
        p.low_ = exp;
        p.c_.push_back(coeff);
    }
    return p;
}

LaurentPoly LaurentPoly::from_terms(const std::vector<std::pair<int, long>>& terms) {
    LaurentPoly p;
    for (auto [e, c] : terms) p.add_scaled(monomial(e, c));
    return p;
}

LaurentPoly LaurentPoly::from_map(const std::map<int, BigInt>& terms) {
    LaurentPoly p;
    if (terms.empty()) return p;
    p.low_ = terms.begin()->first;
    p.c_.assign(terms.rbegin()->first - p.low_ + 1, 0);
    for (auto& [e, c] : terms) p.c_[e - p.low_] = c;
    p.trim();
    return p;
}

LaurentPoly LaurentPoly::delta() { return from_terms({{2, -1}, {-2, -1}}); }

void LaurentPoly::trim() {
    std::size_t lo = 0;
    while (lo < c_.size() && c_[lo] == 0) ++lo;
    if (lo == c_.size()) {
        c_.clear();
        low_ = 0;
        return;
    }
    std::size_t hi = c_.size();
    while (c_[hi - 1] == 0) --hi;
    if (lo > 0 || hi < c_.size()) {
        c_.erase(c_.begin() + hi, c_.end());
        c_.erase(c_.begin(), c_.begin() + lo);
        low_ += static_cast<int>(lo);
    }
}

std::optional<int> LaurentPoly::max_deg() const {
    if (c_.empty()) return std::nullopt;
    return low_ + static_cast<int>(c_.size()) - 1;
}

std::optional<int> LaurentPoly::min_deg() const {
    if (c_.empty()) return std::nullopt;
    return low_;
}

BigInt LaurentPoly::coeff(int exp) const {
    long i = static_cast<long>(exp) - low_;
    if (i < 0 || i >= static_cast<long>(c_.size())) return 0;
    return c_[i];
}

std::map<int, BigInt> LaurentPoly::terms() const {
    std::map<int, BigInt> m;
    for (std::size_t i = 0; i < c_.size(); ++i)
        if (c_[i] != 0) m.emplace(low_ + static_cast<int>(i), c_[i]);
    return m;
}

std::size_t LaurentPoly::term_count() const {
    return std::count_if(c_.begin(), c_.end(), [](const BigInt& x) { return x != 0; });
}

LaurentPoly LaurentPoly::shifted(int k) const {
    LaurentPoly p = *this;
    if (!p.c_.empty()) p.low_ += k;
    return p;
}

LaurentPoly LaurentPoly::inverted() const {
    LaurentPoly p;
    if (c_.empty()) return p;
    p.c_.assign(c_.rbegin(), c_.rend());
    p.low_ = -*max_deg();
    return p;
}

LaurentPoly LaurentPoly::pow(unsigned k) const {
    LaurentPoly result(1), base = *this;
    while (k) {
        if (k & 1) result *= base;
        k >>= 1;
        if (k) base *= base;
    }
    return result;
}

void LaurentPoly::add_scaled(const LaurentPoly& p, int shift, long coeff) {
    if (p.c_.empty() || coeff == 0) return;
    int plow = p.low_ + shift;
    if (c_.empty()) {
        low_ = plow;
        c_ = p.c_;
        if (coeff != 1)
            for (auto& x : c_) x *= coeff;
        return;
    }
    int new_low = std::min(low_, plow);
    int new_high = std::max(low_ + static_cast<int>(c_.size()), plow + static_cast<int>(p.c_.size()));
    if (new_low < low_) c_.insert(c_.begin(), low_ - new_low, BigInt(0));
    low_ = new_low;
    c_.resize(new_high - new_low, 0);
    std::size_t off = plow - low_;
    if (coeff == 1) {
        for (std::size_t i = 0; i < p.c_.size(); ++i) c_[off + i] += p.c_[i];
    } else if (coeff == -1) {
        for (std::size_t i = 0; i < p.c_.size(); ++i) c_[off + i] -= p.c_[i];
    } else {
        for (std::size_t i = 0; i < p.c_.size(); ++i) c_[off + i] += coeff * p.c_[i];
    }
    trim();
}

void LaurentPoly::mul_delta() {
    if (c_.empty()) return;
    std::vector<BigInt> r(c_.size() + 4, 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        r[i] -= c_[i];
        r[i + 4] -= c_[i];
    }
    c_ = std::move(r);
    low_ -= 2;
    trim();
}

LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    if (a.c_.empty() || b.c_.empty()) return r;
    r.low_ = a.low_ + b.low_;
    r.c_.assign(a.c_.size() + b.c_.size() - 1, 0);
    for (std::size_t i = 0; i < a.c_.size(); ++i) {
        if (a.c_[i] == 0) continue;
        for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[i + j] += a.c_[i] * b.c_[j];
    }
    r.trim();
    return r;
}

LaurentPoly& LaurentPoly::operator*=(const LaurentPoly& o) {
    *this = *this * o;
    return *this;
}

LaurentPoly LaurentPoly::operator-() const {
    LaurentPoly p = *this;
    for (auto& x : p.c_) x = -x;
    return p;
}

static std::string power_str(const char* var, int e) {
    if (e == 1) return var;
    return std::string(var) + "^" + std::to_string(e);
}

std::string LaurentPoly::to_string() const {
    if (c_.empty()) return "0";
    std::string s;
    for (std::size_t k = c_.size(); k-- > 0;) {
        const BigInt& c = c_[k];
        if (c == 0) continue;
        int e = low_ + static_cast<int>(k);
        BigInt mag = abs(c);
        if (s.empty())
            s += (c < 0) ? "-" : "";
        else
            s += (c < 0) ? " - " : " + ";
        if (e == 0)
            s += mag.get_str();
        else if (mag == 1)
            s += power_str("A", e);
        else
            s += mag.get_str() + "*" + power_str("A", e);
    }
    return s;
}

nlohmann::json bigint_json(const BigInt& x) {
    if (x.fits_slong_p()) return x.get_si();
    return x.get_str();
}

BigInt bigint_from_json(const nlohmann::json& j) {
    if (j.is_string()) return BigInt(j.get<std::string>());
    return BigInt(j.get<long>());
}

nlohmann::json LaurentPoly::to_json() const {
    auto arr = nlohmann::json::array();
    for (std::size_t k = c_.size(); k-- > 0;)
        if (c_[k] != 0) arr.push_back({low_ + static_cast<int>(k), bigint_json(c_[k])});
    return arr;
}

LaurentPoly LaurentPoly::from_json(const nlohmann::json& j) {
    std::map<int, BigInt> m;
    for (auto& t : j) m[t.at(0).get<int>()] += bigint_from_json(t.at(1));
    return from_map(m);
}

std::optional<int> max_deg(const LaurentPoly& p) { return p.max_deg(); }

LaurentPoly exact_div(const LaurentPoly& p, const LaurentPoly& q) {
    if (q.is_zero()) throw NotDivisible("division by the zero polynomial");
    if (p.is_zero()) return {};
    auto pm = p.terms();
    int plo = *p.min_deg(), phi = *p.max_deg();
    int qlo = *q.min_deg(), qhi = *q.max_deg();
    if (phi - plo < qhi - qlo) throw NotDivisible("degree span of dividend too small");
    std::vector<BigInt> a(phi - plo + 1, 0);
    for (auto& [e, c] : pm) a[e - plo] = c;
    std::vector<BigInt> b(qhi - qlo + 1, 0);
    for (auto& [e, c] : q.terms()) b[e - qlo] = c;
    std::size_t lb = b.size(), lq = a.size() - lb + 1;
    std::vector<BigInt> quot(lq, 0);
    for (std::size_t k = lq; k-- > 0;) {
        BigInt& top = a[k + lb - 1];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b[lb - 1].get_mpz_t()))
            throw NotDivisible("leading coefficient not divisible");
        BigInt f = top / b[lb - 1];
        for (std::size_t j = 0; j < lb; ++j) a[k + j] -= f * b[j];
        quot[k] = f;
    }
    for (auto& x : a)
        if (x != 0) throw NotDivisible("nonzero remainder");
    std::map<int, BigInt> qm;
    for (std::size_t k = 0; k < lq; ++k)
        if (quot[k] != 0) qm[plo - qlo + static_cast<int>(k)] = quot[k];
    return LaurentPoly::from_map(qm);
}

std::string Quarter::to_string() const {
    long g = std::gcd(v < 0 ? -v : v, 4L);
    if (v % 4 == 0) return std::to_string(v / 4);
    return std::to_string(v / g) + "/" + std::to_string(4 / g);
}

QSeries to_q(const LaurentPoly& p) {
    std::map<long, BigInt> t;
    for (auto& [e, c] : p.terms()) t.emplace(-static_cast<long>(e), c);
    return QSeries(std::move(t));
}

std::optional<Quarter> QSeries::min_deg() const {
    if (terms_.empty()) return std::nullopt;
    return Quarter{terms_.begin()->first};
}

std::optional<Quarter> QSeries::max_deg() const {
    if (terms_.empty()) return std::nullopt;
    return Quarter{terms_.rbegin()->first};
}

BigInt QSeries::coeff(Quarter e) const {
    auto it = terms_.find(e.v);
    return it == terms_.end() ? BigInt(0) : it->second;
}

bool QSeries::integral() const {
    for (auto& [e, c] : terms_)
        if (e % 4 != 0) return false;
    return true;
}

std::string QSeries::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (auto& [e, c] : terms_) {
        BigInt mag = abs(c);
        if (s.empty())
            s += (c < 0) ? "-" : "";
        else
            s += (c < 0) ? " - " : " + ";
        std::string var;
        if (e == 4)
            var = "q";
        else if (e % 4 == 0)
            var = "q^" + std::to_string(e / 4);
        else
            var = "q^(" + Quarter{e}.to_string() + ")";
        if (e == 0)
            s += mag.get_str();
        else if (mag == 1)
            s += var;
        else
            s += mag.get_str() + "*" + var;
    }
    return s;
}

nlohmann::json QSeries::to_json() const {
    auto arr = nlohmann::json::array();
    for (auto& [e, c] : terms_) arr.push_back({e, bigint_json(c)});
    return arr;
}

}  // namespace joneslab
