#include "overdisp_cli/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace overdisp::cli {

namespace {

// value = 0.d1 d2 d3 ... * 10^point, with digits stored without the point.
struct Decimal {
    bool negative = false;
    std::string digits;
    int point = 0;
};

Decimal shortest(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::scientific);
    if (res.ec != std::errc{}) throw std::runtime_error("cannot format number");
    std::string text(buf, res.ptr);

    Decimal out;
    std::size_t i = 0;
    if (text[i] == '-') {
        out.negative = true;
        ++i;
    }
    const auto e = text.find('e');
    for (; i < e; ++i) {
        if (text[i] != '.') out.digits.push_back(text[i]);
    }
    out.point = std::stoi(text.substr(e + 1)) + 1;
    return out;
}

// Keeps the first `keep` digits, rounding half to even on the rest.
void round_to(Decimal& d, int keep) {
    // A leading zero absorbs a carry out of the first digit and lets keep = 0 work.
    d.digits.insert(d.digits.begin(), '0');
    d.point += 1;
    keep += 1;
    if (keep <= 0) {
        d.digits = "0";
        return;
    }
    if (static_cast<int>(d.digits.size()) <= keep) {
        d.digits.append(static_cast<std::size_t>(keep) - d.digits.size(), '0');
        return;
    }
    const char first = d.digits[static_cast<std::size_t>(keep)];
    bool rest_nonzero = false;
    for (std::size_t i = static_cast<std::size_t>(keep) + 1; i < d.digits.size(); ++i) {
        if (d.digits[i] != '0') rest_nonzero = true;
    }
    d.digits.resize(static_cast<std::size_t>(keep));
    const bool odd = (d.digits.back() - '0') % 2 == 1;
    const bool up = first > '5' || (first == '5' && (rest_nonzero || odd));
    if (!up) return;
    for (auto i = d.digits.size(); i-- > 0;) {
        if (d.digits[i] == '9') {
            d.digits[i] = '0';
        } else {
            ++d.digits[i];
            break;
        }
    }
}

bool all_zero(const std::string& s) {
    return s.find_first_not_of('0') == std::string::npos;
}

std::string non_finite(double value) {
    if (std::isnan(value)) return "nan";
    return value > 0 ? "inf" : "-inf";
}

}  // namespace

std::string format_fixed(double value, int decimals) {
    if (decimals < 0) throw std::invalid_argument("precision must be non-negative");
    if (!std::isfinite(value)) return non_finite(value);
    const std::string zero = decimals > 0 ? "0." + std::string(static_cast<std::size_t>(decimals), '0') : "0";
    if (value == 0.0) return zero;
    Decimal d = shortest(value);
    round_to(d, d.point + decimals);
    // Now exactly point + decimals digits remain, or "0" when nothing survived.
    if (d.point + decimals <= 0 || all_zero(d.digits)) return zero;

    std::string integer = "0";
    std::string fraction;
    if (d.point <= 0) {
        fraction = std::string(static_cast<std::size_t>(-d.point), '0') + d.digits;
    } else {
        integer = d.digits.substr(0, static_cast<std::size_t>(d.point));
        fraction = d.digits.substr(static_cast<std::size_t>(d.point));
        const auto nz = integer.find_first_not_of('0');
        integer = nz == std::string::npos ? "0" : integer.substr(nz);
    }
    std::string out = d.negative ? "-" : "";
    out += integer;
    if (decimals > 0) out += "." + fraction;
    return out;
}

std::string format_sci(double value, int digits) {
    if (digits < 0) throw std::invalid_argument("precision must be non-negative");
    if (!std::isfinite(value)) return non_finite(value);
    if (value == 0.0) {
        return (digits > 0 ? "0." + std::string(static_cast<std::size_t>(digits), '0') : "0") + "e+00";
    }
    Decimal d = shortest(value);
    round_to(d, digits + 1);
    // Drop the guard zero unless the carry used it.
    if (d.digits.front() == '0') {
        d.digits.erase(d.digits.begin());
        d.point -= 1;
    } else {
        d.digits.pop_back();
    }
    const int exponent = d.point - 1;
    std::string out;
    if (d.negative) out.push_back('-');
    out.push_back(d.digits[0]);
    if (digits > 0) out += "." + d.digits.substr(1, static_cast<std::size_t>(digits));
    char tail[16];
    std::snprintf(tail, sizeof tail, "e%c%02d", exponent < 0 ? '-' : '+', std::abs(exponent));
    return out + tail;
}

}  // namespace overdisp::cli
