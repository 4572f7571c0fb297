#include "qnr/ratio.hpp"

#include <cctype>
#include <cstdlib>

namespace qnr {

int64_t Ratio::i128_to_i64(__int128 v) {
    if (v > INT64_MAX || v < INT64_MIN) {
        throw ParamError("rational overflow");
    }
    return static_cast<int64_t>(v);
}

void Ratio::normalize() {
    if (den_ == 0) {
        throw ParamError("rational with zero denominator");
    }
    if (den_ < 0) {
        num_ = -num_;
        den_ = -den_;
    }
    int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
    if (g > 1) {
        num_ /= g;
        den_ /= g;
    }
    if (num_ == 0) {
        den_ = 1;
    }
}

Ratio Ratio::parse(std::string_view text) {
    if (text.empty()) {
        throw ParseError("empty rational");
    }
    std::string s(text);
    size_t slash = s.find('/');
    if (slash != std::string::npos) {
        size_t pos1 = 0, pos2 = 0;
        int64_t num = std::stoll(s.substr(0, slash), &pos1);
        int64_t den = std::stoll(s.substr(slash + 1), &pos2);
        if (pos1 != slash || pos2 != s.size() - slash - 1) {
            throw ParseError("bad rational '" + s + "'");
        }
        return Ratio(num, den);
    }

    bool negative = false;
    size_t i = 0;
    if (s[i] == '+' || s[i] == '-') {
        negative = s[i] == '-';
        ++i;
    }
    int64_t num = 0;
    int64_t den = 1;
    bool saw_digit = false;
    bool saw_dot = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (saw_dot) throw ParseError("bad rational '" + s + "'");
            saw_dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ParseError("bad rational '" + s + "'");
        }
        saw_digit = true;
        if (num > (INT64_MAX - 9) / 10) throw ParseError("rational out of range '" + s + "'");
        num = num * 10 + (c - '0');
        if (saw_dot) {
            if (den > INT64_MAX / 10) throw ParseError("rational out of range '" + s + "'");
            den *= 10;
        }
    }
    if (!saw_digit) {
        throw ParseError("bad rational '" + s + "'");
    }
    return Ratio(negative ? -num : num, den);
}

std::string Ratio::str() const {
    if (den_ == 1) {
        return std::to_string(num_);
    }
    // Scale the denominator to a power of ten if its factors are only 2 and 5.
    int64_t d = den_;
    int64_t scale = 1;
    while (d % 2 == 0) {
        d /= 2;
        scale = scale * 5;  // pair each 2 with a 5
    }
    while (d % 5 == 0) {
        d /= 5;
        scale = scale * 2;
    }
    if (d != 1 || scale > INT64_MAX / (den_ < 0 ? -den_ : den_)) {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }
    __int128 scaled_num = static_cast<__int128>(num_) * scale;
    __int128 pow10 = static_cast<__int128>(den_) * scale;
    bool neg = scaled_num < 0;
    if (neg) scaled_num = -scaled_num;
    __int128 whole = scaled_num / pow10;
    __int128 frac = scaled_num % pow10;
    std::string digits;
    for (__int128 q = pow10 / 10; q >= 1; q /= 10) {
        digits.push_back(static_cast<char>('0' + static_cast<int>(frac / q % 10)));
    }
    while (!digits.empty() && digits.back() == '0') digits.pop_back();
    std::string whole_str;
    if (whole == 0) {
        whole_str = "0";
    } else {
        while (whole > 0) {
            whole_str.insert(whole_str.begin(), static_cast<char>('0' + static_cast<int>(whole % 10)));
            whole /= 10;
        }
    }
    std::string out = (neg ? "-" : "") + whole_str;
    if (!digits.empty()) out += "." + digits;
    return out;
}

int64_t Ratio::mul_floor(int64_t value) const {
    __int128 prod = static_cast<__int128>(num_) * value;
    __int128 q = prod / den_;
    if (prod % den_ != 0 && (prod < 0)) --q;  // floor toward -inf
    return i128_to_i64(q);
}

} // namespace qnr
