#include "joneslab/jones.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "joneslab/bracket.hpp"
#include "joneslab/errors.hpp"
#include "joneslab/states.hpp"
#include "joneslab/parallel.hpp"

namespace joneslab {

ChebyshevExpansion chebyshev(int n) {
    if (n < 0) throw InvalidN("Chebyshev index must be non-negative");
    std::map<int, long> prev, cur{{0, 1}};
    for (int k = 1; k <= n; ++k) {
        std::map<int, long> next;
        for (auto [e, c] : cur) next[e + 1] += c;
        for (auto [e, c] : prev) next[e] -= c;
        std::erase_if(next, [](const auto& kv) { return kv.second == 0; });
        prev = std::move(cur);
        cur = std::move(next);
    }
    return {n, cur};
}

int max_bracket_degree_bound(const Diagram& d) {
    return d.crossing_count() + 2 * count_circles(d, KauffmanState::all_A(d.crossing_count())) - 2;
}

int chi_A(const Diagram& d) {
    return count_circles(d, KauffmanState::all_A(d.crossing_count())) - d.crossing_count();
}

nlohmann::json DegreeReport::to_json() const {
    nlohmann::json j;
    j["color"] = m;
    j["dA_star"] = dA_star ? nlohmann::json(*dA_star) : nlohmann::json(nullptr);
    j["d"] = d ? nlohmann::json(d->to_string()) : nlohmann::json(nullptr);
    j["h"] = h.to_string();
    j["M_Dn"] = M_Dn;
    j["writhe"] = writhe;
    j["A_adequate"] = adequate;
    return j;
}

bool TailReport::vanishes() const {
    for (auto& b : betas)
        if (b != 0) return false;
    return true;
}

nlohmann::json TailReport::to_json() const {
    nlohmann::json j;
    j["betas"] = nlohmann::json::array();
    for (auto& b : betas) j["betas"].push_back(bigint_json(b));
    j["leading"] = nlohmann::json::array();
    for (auto& b : leading) j["leading"].push_back(bigint_json(b));
    j["stabilized_up_to"] = stabilized_up_to;
    j["A_adequate"] = adequate;
    return j;
}

JonesCalculator::JonesCalculator(Diagram d, EngineOptions opt) : d_(std::move(d)), opt_(opt) {
    if (d_.empty()) throw ValidationError("the empty diagram has no colored Jones polynomial");
    s_A_ = count_circles(d_, KauffmanState::all_A(d_.crossing_count()));
    components_ = d_.component_count();
}

int JonesCalculator::M(int k) const { return k * k * d_.crossing_count() + 2 * k * s_A_ - 2; }

LaurentPoly JonesCalculator::cable_bracket(const std::vector<int>& copies) {
    if (std::all_of(copies.begin(), copies.end(), [](int k) { return k == 0; }))
        throw InvalidN("a cable needs at least one strand");
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = cables_.find(copies);
        if (it != cables_.end()) return it->second;
    }
    LaurentPoly p = bracket(cable(d_, copies), opt_);
    std::lock_guard<std::mutex> lock(mu_);
    cables_.emplace(copies, p);
    return p;
}

LaurentPoly JonesCalculator::cable_bracket(int k) {
    if (k < 1) throw InvalidN("cable index must be at least 1");
    return cable_bracket(std::vector<int>(components_, k));
}

std::vector<std::pair<std::vector<int>, long>> JonesCalculator::expansion(int n) const {
    auto cheb = chebyshev(n);
    std::vector<std::pair<std::vector<int>, long>> terms{{{}, 1}};
    for (int i = 0; i < components_; ++i) {
        std::vector<std::pair<std::vector<int>, long>> next;
        for (auto& [ks, c] : terms)
            for (auto [k, ck] : cheb.coeffs) {
                auto grown = ks;
                grown.push_back(k);
                next.emplace_back(std::move(grown), c * ck);
            }
        terms = std::move(next);
    }
    return terms;
}

void JonesCalculator::prefetch(const std::vector<int>& ns) {
    std::set<std::vector<int>> want;
    for (int n : ns)
        for (auto& [ks, c] : expansion(n))
            if (std::any_of(ks.begin(), ks.end(), [](int k) { return k > 0; })) want.insert(ks);
    std::vector<std::vector<int>> todo;
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (auto& ks : want)
            if (!cables_.count(ks)) todo.push_back(ks);
    }
    // Largest cables first so the slowest job starts immediately.
    auto size = [](const std::vector<int>& ks) { return std::accumulate(ks.begin(), ks.end(), 0); };
    std::stable_sort(todo.begin(), todo.end(), [&](const auto& a, const auto& b) { return size(a) > size(b); });
    parallel_for(opt_.threads, static_cast<std::int64_t>(todo.size()), [&](std::int64_t i) { cable_bracket(todo[i]); });
}

LaurentPoly JonesCalculator::bracket_S_times_delta(int n) {
    if (n < 1) throw InvalidN("bracket of S_n needs n >= 1");
    prefetch({n});
    LaurentPoly delta = LaurentPoly::delta();
    LaurentPoly unreduced;
    for (auto& [ks, c] : expansion(n)) {
        bool empty = std::all_of(ks.begin(), ks.end(), [](int k) { return k == 0; });
        LaurentPoly term = empty ? LaurentPoly(1) : cable_bracket(ks) * delta;
        unreduced.add_scaled(term, 0, c);
    }
    return unreduced;
}

LaurentPoly JonesCalculator::bracket_S(int n) { return exact_div(bracket_S_times_delta(n), LaurentPoly::delta()); }

std::optional<int> JonesCalculator::bracket_S_degree(int n) {
    auto d = bracket_S_times_delta(n).max_deg();
    if (!d) return std::nullopt;
    return *d - 2;
}

LaurentPoly JonesCalculator::G(int m) {
    if (m < 2) throw InvalidN("color must be at least 2");
    int n = m - 1;
    int w = writhe(d_);
    // (A^4 - A^-4) <S_n> = -(A^2 - A^-2) * delta <S_n>
    LaurentPoly num = LaurentPoly::from_terms({{2, -1}, {-2, 1}}) * bracket_S_times_delta(n);
    LaurentPoly den = LaurentPoly::from_terms({{2 * (n + 1), 1}, {-2 * (n + 1), -1}});
    LaurentPoly q = exact_div(num, den);
    int sign = ((n * w) % 2 == 0 ? 1 : -1) * ((n - 1) % 2 == 0 ? 1 : -1);
    return (sign > 0 ? q : -q).shifted(-w * (n * n + 2 * n));
}

DegreeReport JonesCalculator::degree_report(int m) {
    if (m < 2) throw InvalidN("color must be at least 2");
    int n = m - 1;
    int w = writhe(d_);
    DegreeReport r;
    r.m = m;
    r.writhe = w;
    r.M_Dn = M(n);
    r.adequate = is_A_adequate(d_).adequate;
    r.dA_star = bracket_S_degree(n);
    QSeries j = colored_jones(m);
    r.d = j.min_deg();
    long framing = static_cast<long>(w) * (n * n + 2 * n);
    r.h = Quarter{-(r.M_Dn + 4 - 2 * m - framing)};
    if (r.dA_star) {
        Quarter formula{-(*r.dA_star + 4 - 2 * m - framing)};
        if (!r.d || *r.d != formula) throw Error("minimum degree disagrees with the degree formula");
    }
    return r;
}

TailReport JonesCalculator::tail(int count, int max_color) {
    if (count < 1) throw InvalidN("tail length must be positive");
    if (max_color < count + 2) throw InvalidN("max color must be at least count + 2");
    TailReport t;
    t.adequate = is_A_adequate(d_).adequate;
    std::vector<int> ns;
    for (int n = 1; n < max_color; ++n) ns.push_back(n);
    prefetch(ns);
    std::map<int, QSeries> js;
    std::map<int, DegreeReport> reports;
    for (int m = 2; m <= max_color; ++m) {
        js[m] = colored_jones(m);
        reports[m] = degree_report(m);
    }
    // Sign of the all-A term of D^{m-1} after normalization; it alternates
    // with m on the left trefoil and on the Hopf link.
    int parity = ((s_A_ + writhe(d_) + 1) % 2 + 2) % 2;
    auto sign = [&](int m) { return ((m - 1) * parity) % 2 == 0 ? 1 : -1; };
    for (int i = 1; i <= count; ++i) {
        auto read = [&](int m) { return BigInt(sign(m) * js[m].coeff(Quarter{reports[m].h.v + 4L * (i - 1)})); };
        BigInt beta = read(i + 2);
        t.betas.push_back(beta);
        int colors = 0;
        for (int m = std::max(2, i + 1); m <= max_color; ++m) {
            ++colors;
            if (t.adequate && read(m) != beta)
                throw StabilityViolation("coefficient " + std::to_string(i) + " differs between colors " +
                                         std::to_string(i + 2) + " and " + std::to_string(m));
        }
        if (t.adequate && colors >= 2 && t.stabilized_up_to == i - 1) t.stabilized_up_to = i;
    }
    for (int i = 2; i <= count + 1; ++i) {
        const auto& r = reports[i];
        t.leading.push_back(r.d ? BigInt(sign(i) * js[i].coeff(Quarter{r.d->v + 4L * (i - 2)})) : BigInt(0));
    }
    return t;
}

LaurentPoly bracket_S(const Diagram& d, int n, const EngineOptions& opt) {
    return JonesCalculator(d, opt).bracket_S(n);
}

LaurentPoly bracket_S_times_delta(const Diagram& d, int n, const EngineOptions& opt) {
    return JonesCalculator(d, opt).bracket_S_times_delta(n);
}

QSeries colored_jones(const Diagram& d, int m, const EngineOptions& opt) {
    return JonesCalculator(d, opt).colored_jones(m);
}

DegreeReport degree_report(const Diagram& d, int m, const EngineOptions& opt) {
    return JonesCalculator(d, opt).degree_report(m);
}

TailReport tail(const Diagram& d, int count, int max_color, const EngineOptions& opt) {
    return JonesCalculator(d, opt).tail(count, max_color);
}

}  // namespace joneslab
