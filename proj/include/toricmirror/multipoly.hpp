#ifndef TORICMIRROR_MULTIPOLY_HPP
#define TORICMIRROR_MULTIPOLY_HPP

#include <toricmirror/rational.hpp>

#include <cstddef>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace toricmirror
{

// Sparse polynomial with rational coefficients. Exponent vectors are stored
// with trailing zeros stripped, so no variable count is needed. Negative
// exponents are allowed (Laurent variables); callers decide which variables
// may carry them.
class MultiPoly
{
public:
    using Exponent = std::vector<int>;
    using Terms = std::map<Exponent, Rational>;

    MultiPoly() = default;
    MultiPoly(const Rational &c) // NOLINT: implicit scalar embedding
    {
        if (c != 0) terms_[{}] = c;
    }
    MultiPoly(long c) : MultiPoly(Rational(c)) {} // NOLINT

    static MultiPoly monomial(Exponent e, const Rational &c = 1)
    {
        MultiPoly p;
        strip(e);
        if (c != 0) p.terms_[std::move(e)] = c;
        return p;
    }

    static MultiPoly variable(std::size_t i, int power = 1)
    {
        Exponent e(i + 1, 0);
        e[i] = power;
        return monomial(std::move(e));
    }

    const Terms &terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    Rational constant_term() const
    {
        auto it = terms_.find({});
        return it == terms_.end() ? Rational(0) : it->second;
    }

    MultiPoly &operator+=(const MultiPoly &o)
    {
        for (const auto &[e, c] : o.terms_) add(e, c);
        return *this;
    }
    MultiPoly &operator-=(const MultiPoly &o)
    {
        for (const auto &[e, c] : o.terms_) add(e, -c);
        return *this;
    }
    MultiPoly &operator*=(const MultiPoly &o)
    {
        *this = *this * o;
        return *this;
    }
    friend MultiPoly operator+(MultiPoly a, const MultiPoly &b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly &b) { return a -= b; }
    friend MultiPoly operator-(MultiPoly a)
    {
        for (auto &[e, c] : a.terms_) c = -c;
        return a;
    }
    friend MultiPoly operator*(const MultiPoly &a, const MultiPoly &b)
    {
        MultiPoly r;
        for (const auto &[ea, ca] : a.terms_) {
            for (const auto &[eb, cb] : b.terms_) {
                Exponent e(std::max(ea.size(), eb.size()), 0);
                for (std::size_t i = 0; i < ea.size(); ++i) e[i] += ea[i];
                for (std::size_t i = 0; i < eb.size(); ++i) e[i] += eb[i];
                strip(e);
                r.add(e, ca * cb);
            }
        }
        return r;
    }
    friend bool operator==(const MultiPoly &a, const MultiPoly &b) { return a.terms_ == b.terms_; }
    friend bool operator!=(const MultiPoly &a, const MultiPoly &b) { return !(a == b); }

    // Replace each variable by a value in a commutative ring R. `value(i, e)`
    // must return the e-th power of variable i (e may be negative only where
    // the caller allows it).
    template <class R, class PowerFn>
    R substitute(const R &zero, const R &one, PowerFn &&power) const
    {
        R acc = zero;
        for (const auto &[e, c] : terms_) {
            R t = one;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] != 0) t = t * power(i, e[i]);
            }
            acc = acc + t * c;
        }
        return acc;
    }

    // Total degree in the given variables (ignores others).
    int max_exponent(std::size_t var) const
    {
        int m = 0;
        bool first = true;
        for (const auto &[e, c] : terms_) {
            const int v = var < e.size() ? e[var] : 0;
            if (first || v > m) m = v;
            first = false;
        }
        return m;
    }

    int min_exponent(std::size_t var) const
    {
        int m = 0;
        bool first = true;
        for (const auto &[e, c] : terms_) {
            const int v = var < e.size() ? e[var] : 0;
            if (first || v < m) m = v;
            first = false;
        }
        return m;
    }

    std::string str(const std::vector<std::string> &names) const
    {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        for (const auto &[e, c] : terms_) {
            if (!first) os << " + ";
            first = false;
            bool any = false;
            if (c != 1 || e.empty()) {
                os << c.get_str();
                any = true;
            }
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (any) os << "*";
                os << (i < names.size() ? names[i] : "x" + std::to_string(i));
                if (e[i] != 1) os << "^" << e[i];
                any = true;
            }
        }
        return os.str();
    }

private:
    static void strip(Exponent &e)
    {
        while (!e.empty() && e.back() == 0) e.pop_back();
    }

    void add(const Exponent &e, const Rational &c)
    {
        if (c == 0) return;
        auto [it, inserted] = terms_.try_emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (it->second == 0) terms_.erase(it);
        }
    }

    Terms terms_;
};

inline MultiPoly operator*(const MultiPoly &a, const Rational &q)
{
    return a * MultiPoly(q);
}

} // namespace toricmirror

#endif
