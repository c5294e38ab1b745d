#ifndef TORICMIRROR_RATIONAL_HPP
#define TORICMIRROR_RATIONAL_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>
#include <string_view>

namespace toricmirror
{

using Rational = mpq_class;
using Integer = mpz_class;

// Bad user input. The CLI maps this to exit code 2.
class input_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// A mathematical precondition of an operation does not hold.
class precondition_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Evaluation hit a pole, i.e. the specialization was not generic enough.
class pole_collision_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class internal_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

inline Rational parse_rational(std::string_view s)
{
    std::string str(s);
    auto strip = [](std::string &t) {
        while (!t.empty() && (t.front() == ' ')) t.erase(t.begin());
        while (!t.empty() && (t.back() == ' ')) t.pop_back();
    };
    strip(str);
    if (str.empty()) {
        throw input_error("empty rational string");
    }
    const auto slash = str.find('/');
    auto check_int = [&](const std::string &t) {
        std::size_t start = (!t.empty() && (t[0] == '-' || t[0] == '+')) ? 1 : 0;
        if (t.size() == start) {
            throw input_error("malformed rational string \"" + str + "\"");
        }
        for (std::size_t i = start; i < t.size(); ++i) {
            if (t[i] < '0' || t[i] > '9') {
                throw input_error("malformed rational string \"" + str + "\"");
            }
        }
    };
    if (slash == std::string::npos) {
        check_int(str);
        if (str[0] == '+') str.erase(str.begin());
        return Rational(Integer(str));
    }
    std::string num = str.substr(0, slash), den = str.substr(slash + 1);
    check_int(num);
    check_int(den);
    if (num[0] == '+') num.erase(num.begin());
    if (den[0] == '+') den.erase(den.begin());
    Integer d(den);
    if (d == 0) {
        throw input_error("zero denominator in rational string \"" + str + "\"");
    }
    Rational q(Integer(num), d);
    q.canonicalize();
    return q;
}

inline std::string to_string(const Rational &q)
{
    return q.get_str();
}

inline Rational rational_from_int(long v)
{
    return Rational(v);
}

} // namespace toricmirror

#endif
