#include "tamed/rational.hpp"

#include "tamed/error.hpp"

#include <cctype>
#include <charconv>
#include <limits>
#include <numeric>
#include <tuple>
#include <utility>

namespace tamed {

namespace {

using Wide = __int128;

std::int64_t narrow(Wide v) {
    if (v > std::numeric_limits<std::int64_t>::max() ||
        v < std::numeric_limits<std::int64_t>::min()) {
        throw Error(ErrorKind::InvalidRange, "rational arithmetic overflow");
    }
    return static_cast<std::int64_t>(v);
}

Wide gcd_wide(Wide a, Wide b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Wide t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::pair<std::int64_t, std::int64_t> reduce(Wide num, Wide den) {
    if (den == 0) throw Error(ErrorKind::InvalidRange, "rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    Wide g = gcd_wide(num, den);
    if (g > 1) {
        num /= g;
        den /= g;
    }
    return {narrow(num), narrow(den)};
}

Rational make_reduced(Wide num, Wide den) {
    const auto [n, d] = reduce(num, den);
    return Rational(n, d);
}

std::int64_t parse_int(std::string_view s, std::string_view whole) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) {
        throw Error(ErrorKind::ConfigError,
                    "cannot parse '" + std::string(whole) + "' as an exact rational");
    }
    return v;
}

Rational pow10(int e) {
    Wide p = 1;
    for (int i = 0; i < e; ++i) p *= 10;
    return make_reduced(p, 1);
}

Rational parse_decimal(std::string_view s, std::string_view whole) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    int exponent = 0;
    if (auto e = s.find_first_of("eE"); e != std::string_view::npos) {
        exponent = static_cast<int>(parse_int(s.substr(e + 1), whole));
        s = s.substr(0, e);
    }
    std::string digits;
    int frac_digits = 0;
    bool seen_point = false;
    for (char c : s) {
        if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            digits.push_back(c);
            if (seen_point) ++frac_digits;
        } else {
            throw Error(ErrorKind::ConfigError,
                        "cannot parse '" + std::string(whole) + "' as an exact rational");
        }
    }
    if (digits.empty()) {
        throw Error(ErrorKind::ConfigError,
                    "cannot parse '" + std::string(whole) + "' as an exact rational");
    }
    if (digits.size() > 18) {
        throw Error(ErrorKind::InvalidRange, "too many digits in '" + std::string(whole) + "'");
    }
    Rational value(parse_int(digits, whole));
    int scale = exponent - frac_digits;
    if (scale > 18 || scale < -18) {
        throw Error(ErrorKind::InvalidRange, "exponent out of range in '" + std::string(whole) + "'");
    }
    value = scale >= 0 ? value * pow10(scale) : value / pow10(-scale);
    return negative ? Rational(0) - value : value;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    std::tie(num_, den_) = reduce(num, den);
}

Rational Rational::parse(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        return Rational(parse_int(s.substr(0, slash), text), parse_int(s.substr(slash + 1), text));
    }
    if (auto caret = s.find('^'); caret != std::string_view::npos) {
        std::int64_t base = parse_int(s.substr(0, caret), text);
        std::int64_t e = parse_int(s.substr(caret + 1), text);
        if (base == 0 || e > 62 || e < -62) {
            throw Error(ErrorKind::InvalidRange, "power out of range in '" + std::string(text) + "'");
        }
        Rational result(1);
        Rational factor = e >= 0 ? Rational(base) : Rational(1, base);
        for (std::int64_t i = 0; i < (e >= 0 ? e : -e); ++i) result = result * factor;
        return result;
    }
    return parse_decimal(s, text);
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ + Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.den_ - Wide(b.num_) * a.den_, Wide(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return make_reduced(Wide(a.num_) * b.num_, Wide(a.den_) * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error(ErrorKind::InvalidRange, "rational division by zero");
    return make_reduced(Wide(a.num_) * b.den_, Wide(a.den_) * b.num_);
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept {
    Wide lhs = Wide(a.num_) * b.den_;
    Wide rhs = Wide(b.num_) * a.den_;
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace tamed
