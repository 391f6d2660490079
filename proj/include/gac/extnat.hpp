#pragma once

#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace gac {

// Edge multiplicity: a natural number or infinity.
// Infinity is the largest value under the natural ordering; addition saturates.
class ExtNat {
public:
    constexpr ExtNat() = default;
    constexpr ExtNat(std::uint64_t n) : v_(n) {
        if (n == kInf) throw std::overflow_error("multiplicity too large");
    }

    static constexpr ExtNat infinity() {
        ExtNat e;
        e.v_ = kInf;
        return e;
    }

    constexpr bool is_infinite() const { return v_ == kInf; }
    constexpr bool is_zero() const { return v_ == 0; }

    constexpr std::uint64_t finite_value() const {
        if (is_infinite()) throw std::logic_error("finite_value() on infinity");
        return v_;
    }

    ExtNat operator+(ExtNat o) const {
        if (is_infinite() || o.is_infinite()) return infinity();
        if (v_ > kInf - 1 - o.v_) throw std::overflow_error("multiplicity overflow");
        ExtNat r;
        r.v_ = v_ + o.v_;
        return r;
    }
    ExtNat& operator+=(ExtNat o) { return *this = *this + o; }

    auto operator<=>(const ExtNat&) const = default;

    std::string to_string() const { return is_infinite() ? "inf" : std::to_string(v_); }

    // Accepts a decimal integer or the token "inf". Throws std::invalid_argument.
    static ExtNat parse(const std::string& s) {
        if (s == "inf") return infinity();
        if (s.empty()) throw std::invalid_argument("empty multiplicity");
        for (char c : s)
            if (c < '0' || c > '9') throw std::invalid_argument("bad multiplicity '" + s + "'");
        if (s.size() > 18) throw std::invalid_argument("multiplicity too large '" + s + "'");
        return ExtNat(std::stoull(s));
    }

private:
    static constexpr std::uint64_t kInf = ~std::uint64_t{0};
    std::uint64_t v_ = 0;
};

}  // namespace gac
