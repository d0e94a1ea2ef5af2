// Truncated Laurent series: finite sums c * t^j z^m with exact rational
// coefficients, lattice exponents m, and hard truncation above t^order.
#pragma once

#include <map>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "scatter/rational.hpp"
#include "scatter/vec.hpp"

namespace scatter {

struct MonoKey {
    int j = 0;
    IVec m;

    friend auto operator<=>(const MonoKey&, const MonoKey&) = default;
};

class TruncatedSeries {
public:
    explicit TruncatedSeries(int order) : order_(order) {
        if (order < 0) throw std::invalid_argument("series order must be >= 0");
    }

    static TruncatedSeries one(int order) {
        TruncatedSeries s(order);
        s.terms_[MonoKey{0, {0, 0}}] = 1;
        return s;
    }

    static TruncatedSeries monomial(int order, const IVec& m, int j, const Rat& c) {
        TruncatedSeries s(order);
        s.add_term(m, j, c);
        return s;
    }

    int order() const { return order_; }
    const std::map<MonoKey, Rat>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const {
        return terms_.size() == 1 && terms_.begin()->first == MonoKey{0, {0, 0}} &&
               terms_.begin()->second == 1;
    }

    Rat coefficient(const IVec& m, int j) const {
        auto it = terms_.find(MonoKey{j, m});
        return it == terms_.end() ? Rat(0) : it->second;
    }

    void add_term(const IVec& m, int j, const Rat& c) {
        if (j < 0) throw std::invalid_argument("negative t-order");
        if (j > order_ || c == 0) return;
        Rat& slot = terms_[MonoKey{j, m}];
        slot += c;
        if (slot == 0) terms_.erase(MonoKey{j, m});
    }

    bool operator==(const TruncatedSeries& o) const {
        return order_ == o.order_ && terms_ == o.terms_;
    }

    TruncatedSeries operator+(const TruncatedSeries& o) const {
        check_order(o);
        TruncatedSeries out = *this;
        for (const auto& [k, c] : o.terms_) out.add_term(k.m, k.j, c);
        return out;
    }

    TruncatedSeries operator-(const TruncatedSeries& o) const {
        check_order(o);
        TruncatedSeries out = *this;
        for (const auto& [k, c] : o.terms_) out.add_term(k.m, k.j, -c);
        return out;
    }

    TruncatedSeries operator*(const TruncatedSeries& o) const {
        check_order(o);
        TruncatedSeries out(order_);
        for (const auto& [ka, ca] : terms_) {
            for (const auto& [kb, cb] : o.terms_) {
                int j = ka.j + kb.j;
                if (j > order_) continue;
                out.add_term(ka.m + kb.m, j, ca * cb);
            }
        }
        return out;
    }

    TruncatedSeries scaled(const Rat& c) const {
        TruncatedSeries out(order_);
        if (c == 0) return out;
        for (const auto& [k, v] : terms_) out.terms_[k] = v * c;
        return out;
    }

    TruncatedSeries truncated(int new_order) const {
        TruncatedSeries out(new_order);
        for (const auto& [k, c] : terms_) out.add_term(k.m, k.j, c);
        return out;
    }

    // strictly positive t-order part
    TruncatedSeries positive_part() const {
        TruncatedSeries out(order_);
        for (const auto& [k, c] : terms_)
            if (k.j >= 1) out.terms_[k] = c;
        return out;
    }

    int min_positive_order() const {
        int lo = order_ + 1;
        for (const auto& [k, c] : terms_)
            if (k.j >= 1 && k.j < lo) lo = k.j;
        return lo;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << num_str(c);
            if (denominator(c) != 1) os << "/" << den_str(c);
            os << "*t^" << k.j << "*z^" << to_string(k.m);
        }
        return os.str();
    }

private:
    void check_order(const TruncatedSeries& o) const {
        if (order_ != o.order_) throw std::invalid_argument("series order mismatch");
    }

    int order_;
    std::map<MonoKey, Rat> terms_;
};

inline TruncatedSeries series_exp(const TruncatedSeries& f) {
    if (f.terms().size() != f.positive_part().terms().size())
        throw std::invalid_argument("series_exp needs strictly positive t-orders");
    TruncatedSeries out = TruncatedSeries::one(f.order());
    TruncatedSeries term = TruncatedSeries::one(f.order());
    int lo = f.min_positive_order();
    if (lo > f.order()) return out;
    for (int k = 1; k * lo <= f.order(); ++k) {
        term = (term * f).scaled(Rat(1, k));
        if (term.is_zero()) break;
        out = out + term;
    }
    return out;
}

inline TruncatedSeries series_log(const TruncatedSeries& f) {
    TruncatedSeries g = f - TruncatedSeries::one(f.order());
    if (g.terms().size() != g.positive_part().terms().size())
        throw std::invalid_argument("series_log needs f = 1 + higher t-orders");
    TruncatedSeries out(f.order());
    TruncatedSeries p = TruncatedSeries::one(f.order());
    int lo = g.min_positive_order();
    if (lo > f.order()) return out;
    for (int k = 1; k * lo <= f.order(); ++k) {
        p = p * g;
        if (p.is_zero()) break;
        out = out + p.scaled(Rat(k % 2 == 1 ? 1 : -1, k));
    }
    return out;
}

inline TruncatedSeries series_inv(const TruncatedSeries& f) {
    Rat c0 = f.coefficient({0, 0}, 0);
    if (c0 == 0)
        throw std::invalid_argument("series_inv needs a unit constant term");
    TruncatedSeries g = f.scaled(Rat(1) / c0) - TruncatedSeries::one(f.order());
    TruncatedSeries out = TruncatedSeries::one(f.order());
    TruncatedSeries p = TruncatedSeries::one(f.order());
    int lo = g.min_positive_order();
    for (int k = 1; !g.is_zero() && k * lo <= f.order(); ++k) {
        p = p * g;
        if (p.is_zero()) break;
        out = out + p.scaled(Rat(k % 2 == 0 ? 1 : -1));
    }
    return out.scaled(Rat(1) / c0);
}

// f^p for integer p (negative p goes through series_inv)
inline TruncatedSeries series_pow(const TruncatedSeries& f, long long p) {
    TruncatedSeries base = p < 0 ? series_inv(f) : f;
    long long e = p < 0 ? -p : p;
    TruncatedSeries out = TruncatedSeries::one(f.order());
    for (long long i = 0; i < e; ++i) out = out * base;
    return out;
}

}  // namespace scatter
