// The 2D tropical vertex Lie algebra and its exponential group.
//
// Elements are finite sums  z^m t^j d_n  with <m, n> = 0, stored as a map
// (j, m) -> n-payload (rational dual vector, coefficient folded in). The
// bracket is [z^m d_n, z^m' d_n'] = z^(m+m') d_(<m',n> n' - <m,n'> n).
// Group elements are kept by their logs; exp acts on series as a nilpotent
// derivation (every term raises the t-order).
#pragma once

#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "scatter/series.hpp"

namespace scatter {

class LieElement {
public:
    explicit LieElement(int order) : order_(order) {
        if (order < 0) throw std::invalid_argument("lie order must be >= 0");
    }

    static LieElement term(int order, const IVec& m, const QVec& n, int j) {
        LieElement e(order);
        e.add_term(m, n, j);
        return e;
    }

    int order() const { return order_; }
    const std::map<MonoKey, QVec>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const IVec& m, const QVec& n, int j) {
        if (j < 1) throw std::invalid_argument("lie term needs t-order >= 1");
        if (m.is_zero()) throw std::invalid_argument("lie term needs m != 0");
        if (pairing(m, n) != 0)
            throw std::invalid_argument("lie term needs <m, n> = 0");
        if (j > order_ || n.is_zero()) return;
        MonoKey k{j, m};
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_[k] = n;
        } else {
            it->second = it->second + n;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    QVec payload(const IVec& m, int j) const {
        auto it = terms_.find(MonoKey{j, m});
        return it == terms_.end() ? QVec{} : it->second;
    }

    bool operator==(const LieElement& o) const {
        return order_ == o.order_ && terms_ == o.terms_;
    }

    LieElement operator+(const LieElement& o) const {
        check_order(o);
        LieElement out = *this;
        for (const auto& [k, n] : o.terms_) out.add_term(k.m, n, k.j);
        return out;
    }

    LieElement operator-(const LieElement& o) const {
        check_order(o);
        LieElement out = *this;
        for (const auto& [k, n] : o.terms_) out.add_term(k.m, -n, k.j);
        return out;
    }

    LieElement operator-() const { return scaled(Rat(-1)); }

    LieElement scaled(const Rat& c) const {
        LieElement out(order_);
        if (c == 0) return out;
        for (const auto& [k, n] : terms_) out.terms_[k] = n * c;
        return out;
    }

    LieElement truncated(int new_order) const {
        LieElement out(new_order);
        for (const auto& [k, n] : terms_)
            if (k.j <= new_order) out.terms_[k] = n;
        return out;
    }

    int min_order() const {
        int lo = order_ + 1;
        for (const auto& [k, n] : terms_)
            if (k.j < lo) lo = k.j;
        return lo;
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, n] : terms_) {
            if (!first) os << " + ";
            first = false;
            os << "t^" << k.j << "*z^" << to_string(k.m) << "*d_" << to_string(n);
        }
        return os.str();
    }

private:
    void check_order(const LieElement& o) const {
        if (order_ != o.order_) throw std::invalid_argument("lie order mismatch");
    }

    int order_;
    std::map<MonoKey, QVec> terms_;
};

inline LieElement bracket(const LieElement& a, const LieElement& b) {
    if (a.order() != b.order()) throw std::invalid_argument("lie order mismatch");
    LieElement out(a.order());
    for (const auto& [ka, na] : a.terms()) {
        for (const auto& [kb, nb] : b.terms()) {
            int j = ka.j + kb.j;
            if (j > a.order()) continue;
            Rat c1 = pairing(kb.m, na);
            Rat c2 = pairing(ka.m, nb);
            QVec n = nb * c1 - na * c2;
            if (n.is_zero()) continue;
            out.add_term(ka.m + kb.m, n, j);
        }
    }
    return out;
}

// Derivation attached to a Lie element: D(z^m' t^j') = sum <m',n> z^(m'+m) t^(j'+j).
inline TruncatedSeries derive(const LieElement& L, const TruncatedSeries& f) {
    if (L.order() != f.order()) throw std::invalid_argument("order mismatch");
    TruncatedSeries out(f.order());
    for (const auto& [kf, c] : f.terms()) {
        for (const auto& [kl, n] : L.terms()) {
            int j = kf.j + kl.j;
            if (j > f.order()) continue;
            Rat w = pairing(kf.m, n) * c;
            if (w == 0) continue;
            out.add_term(kf.m + kl.m, j, w);
        }
    }
    return out;
}

// exp(L) acting on f; terminates because every term of L raises the t-order.
inline TruncatedSeries apply_automorphism(const LieElement& L, const TruncatedSeries& f) {
    TruncatedSeries out = f;
    TruncatedSeries term = f;
    for (int k = 1;; ++k) {
        term = derive(L, term).scaled(Rat(1, k));
        if (term.is_zero()) break;
        out = out + term;
    }
    return out;
}

inline TruncatedSeries generator_x(int order) {
    return TruncatedSeries::monomial(order, {1, 0}, 0, 1);
}
inline TruncatedSeries generator_y(int order) {
    return TruncatedSeries::monomial(order, {0, 1}, 0, 1);
}

// Recover a Lie element from the automorphism it generates. The operator log
// sum (-1)^(k+1)/k (act - id)^k applied to both generator monomials pins each
// (j, m) payload componentwise: the image term z^((1,0)+m) t^j of the first
// generator carries <(1,0), n> = n_x, the second one n_y.
using SeriesMap = std::function<TruncatedSeries(const TruncatedSeries&)>;

inline LieElement action_log(const SeriesMap& act, int order) {
    auto op_log = [&](const TruncatedSeries& f) {
        TruncatedSeries out(order);
        TruncatedSeries p = f;
        for (int k = 1; k <= order; ++k) {
            p = act(p) - p;
            if (p.is_zero()) break;
            out = out + p.scaled(Rat(k % 2 == 1 ? 1 : -1, k));
        }
        return out;
    };
    TruncatedSeries img1 = op_log(generator_x(order));
    TruncatedSeries img2 = op_log(generator_y(order));
    std::map<MonoKey, QVec> payload;
    for (const auto& [k, c] : img1.terms())
        payload[MonoKey{k.j, k.m - IVec{1, 0}}].x = c;
    for (const auto& [k, c] : img2.terms())
        payload[MonoKey{k.j, k.m - IVec{0, 1}}].y = c;
    LieElement out(order);
    for (const auto& [k, n] : payload) out.add_term(k.m, n, k.j);
    return out;
}

// Dynkin summation for log(exp(x) exp(y)): sum over letter words of the
// right-nested bracket ad_{l_1}...ad_{l_(R-1)}(l_R) times the aggregated
// coefficient over block decompositions x^(r_1) y^(s_1)...x^(r_n) y^(s_n)
// of the word, (-1)^(n-1) / (n R prod r_i! s_i!). Words are walked from the
// right so extensions reuse the inner bracket; a zero inner bracket prunes
// the whole branch. The truncation is sharp because every letter carries
// t-order >= 1.
inline LieElement bch(const LieElement& x, const LieElement& y) {
    if (x.order() != y.order()) throw std::invalid_argument("lie order mismatch");
    int order = x.order();
    if (x.is_zero()) return y;
    if (y.is_zero()) return x;
    int lo = std::min(x.min_order(), y.min_order());
    int max_letters = order / std::max(lo, 1);
    LieElement total(order);

    std::vector<long long> factorial(max_letters + 1);
    factorial[0] = 1;
    for (int i = 1; i <= max_letters; ++i) factorial[i] = factorial[i - 1] * i;

    // word stored left to right, true = x letter
    auto word_coeff = [&](const std::vector<bool>& w) -> Rat {
        int R = static_cast<int>(w.size());
        // dp[i][n] = sum over decompositions of w[0..i) into n blocks of
        // prod 1/(r_j! s_j!); a block is an x-run followed by a y-run
        std::vector<std::vector<Rat>> dp(R + 1, std::vector<Rat>(R + 1));
        dp[0][0] = Rat(1);
        for (int i = 1; i <= R; ++i) {
            for (int a = i - 1; a >= 0; --a) {
                // block w[a..i): valid iff no x follows a y
                int r = 0, s = 0;
                bool valid = true, seen_y = false;
                for (int p = a; p < i; ++p) {
                    if (w[p]) {
                        if (seen_y) { valid = false; break; }
                        ++r;
                    } else {
                        seen_y = true;
                        ++s;
                    }
                }
                if (!valid) continue;
                Rat weight(1, factorial[r] * factorial[s]);
                for (int n = 1; n <= i; ++n)
                    if (dp[a][n - 1] != 0) dp[i][n] += dp[a][n - 1] * weight;
            }
        }
        Rat c(0);
        for (int n = 1; n <= R; ++n)
            if (dp[R][n] != 0) c += dp[R][n] * Rat(n % 2 == 1 ? 1 : -1, n);
        return c / Rat(R);
    };

    std::vector<bool> word;
    // value = right-nested bracket of `word`; extend by prepending letters
    auto rec = [&](auto&& self, const LieElement& value) -> void {
        Rat c = word_coeff(word);
        if (c != 0) total = total + value.scaled(c);
        if (static_cast<int>(word.size()) >= max_letters) return;
        for (bool letter : {true, false}) {
            LieElement next = bracket(letter ? x : y, value);
            if (next.is_zero()) continue;
            word.insert(word.begin(), letter);
            self(self, next);
            word.erase(word.begin());
        }
    };
    word.assign(1, true);
    rec(rec, x);
    word.assign(1, false);
    rec(rec, y);
    return total;
}

// Group element stored by its log. Composition is bch; equality is equality
// of the generated automorphism on the two generator monomials.
class GroupElement {
public:
    explicit GroupElement(int order) : log_(order) {}
    explicit GroupElement(LieElement log) : log_(std::move(log)) {}

    static GroupElement identity(int order) { return GroupElement(order); }

    const LieElement& log() const { return log_; }
    int order() const { return log_.order(); }
    bool is_identity_log() const { return log_.is_zero(); }

    GroupElement inverse() const { return GroupElement(log_.scaled(Rat(-1))); }

    TruncatedSeries act(const TruncatedSeries& f) const {
        return apply_automorphism(log_, f);
    }

    // this after other: (a.compose(b)).act == a.act(b.act(.))
    GroupElement compose(const GroupElement& other) const {
        return GroupElement(bch(log_, other.log_));
    }

private:
    LieElement log_;
};

inline bool group_equal(const GroupElement& g1, const GroupElement& g2) {
    if (g1.order() != g2.order()) throw std::invalid_argument("group order mismatch");
    int order = g1.order();
    return g1.act(generator_x(order)) == g2.act(generator_x(order)) &&
           g1.act(generator_y(order)) == g2.act(generator_y(order));
}

inline bool acts_as_identity(const GroupElement& g) {
    int order = g.order();
    return g.act(generator_x(order)) == generator_x(order) &&
           g.act(generator_y(order)) == generator_y(order);
}

}  // namespace scatter
