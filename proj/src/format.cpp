#include "fpx/format.hpp"

#include <cmath>
#include <numeric>

namespace fpx {

float FpxFormat::max_representable() const {
    const int e_max = (1 << exp_bits) - 1;  // all-ones exponent is a value
    const double frac = 2.0 - std::ldexp(1.0, -man_bits);
    return static_cast<float>(std::ldexp(frac, e_max - bias()));
}

float FpxFormat::ulp_at(double magnitude) const {
    magnitude = std::fabs(magnitude);
    const int e_min = 1 - bias();
    const int e_max = (1 << exp_bits) - 1 - bias();
    int e = e_min;
    if (magnitude >= std::ldexp(1.0, e_min)) {
        e = static_cast<int>(std::floor(std::log2(magnitude)));
        if (e > e_max) e = e_max;
    }
    return static_cast<float>(std::ldexp(1.0, e - man_bits));
}

std::string FpxFormat::name() const {
    return "e" + std::to_string(exp_bits) + "m" + std::to_string(man_bits);
}

FpxFormat FpxFormat::make(int exp_bits, int man_bits) {
    const int total = 1 + exp_bits + man_bits;
    if (exp_bits < 1 || exp_bits > 5 || man_bits < 0 || man_bits > 6 ||
        total < 3 || total > 8) {
        throw Error(ErrorCode::InvalidFormat,
                    "unsupported minifloat format e" + std::to_string(exp_bits) +
                        "m" + std::to_string(man_bits));
    }
    return {exp_bits, man_bits};
}

std::optional<FpxFormat> FpxFormat::parse(std::string_view name) {
    // Accept "e<E>m<M>" with single-digit fields.
    if (name.size() != 4 || name[0] != 'e' || name[2] != 'm') return std::nullopt;
    if (name[1] < '0' || name[1] > '9' || name[3] < '0' || name[3] > '9')
        return std::nullopt;
    const int e = name[1] - '0';
    const int m = name[3] - '0';
    try {
        return make(e, m);
    } catch (const Error&) {
        return std::nullopt;
    }
}

int SplitScheme::total() const {
    return std::accumulate(widths.begin(), widths.end(), 0);
}

SplitScheme SplitScheme::for_format(const FpxFormat& fmt) {
    switch (fmt.total_bits()) {
        case 3: return {{2, 1}};
        case 4: return {{4}};
        case 5: return {{4, 1}};
        case 6: return {{2, 4}};  // the 2+4 scheme
        case 7: return {{4, 2, 1}};
        case 8: return {{4, 4}};
    }
    throw Error(ErrorCode::InvalidFormat, "no split for " + fmt.name());
}

SplitScheme SplitScheme::make(std::vector<int> widths, const FpxFormat& fmt) {
    SplitScheme s{std::move(widths)};
    for (int w : s.widths) {
        if (w != 1 && w != 2 && w != 4)
            throw Error(ErrorCode::UnsupportedSplit,
                        "segment widths must be 1, 2 or 4");
    }
    if (s.total() != fmt.total_bits())
        throw Error(ErrorCode::UnsupportedSplit,
                    "segment widths must sum to " +
                        std::to_string(fmt.total_bits()) + " for " + fmt.name());
    return s;
}

}  // namespace fpx
