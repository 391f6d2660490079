#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace gac {

using BigInt = boost::multiprecision::cpp_int;

// A count that may be countably infinite (written "w" in display form).
struct Card {
    bool omega = false;
    std::uint64_t value = 0;

    static constexpr Card of(std::uint64_t n) { return Card{false, n}; }
    static constexpr Card inf() { return Card{true, 0}; }

    bool is_zero() const { return !omega && value == 0; }
    Card operator+(Card o) const {
        if (omega || o.omega) return inf();
        return of(value + o.value);
    }
    bool operator==(const Card&) const = default;
    std::string to_string() const { return omega ? "w" : std::to_string(value); }
};

// Descriptor of a (mostly finitely generated) abelian group, held in canonical
// form:
//
//   torsion chain  d_1 | d_2 | ... (each d_i >= 2),
//   omega torsion  a set of prime powers q, each standing for (Z/q)^(w),
//   free rank      a Card (Z^w is a legal coefficient group, e.g. Q^x),
//   divisible rank a count of symbolic divisible summands D (quotients by any
//                  d >= 1 vanish, no d-torsion).
//
// Equality of descriptors is equality of all four components.  The omega
// torsion component exists because quotienting a Z^w summand by d yields
// (Z/d)^w, which no finite invariant-factor list can hold.
class AbGroup {
public:
    AbGroup() = default;

    static AbGroup trivial() { return AbGroup(); }
    static AbGroup free(Card rank);
    static AbGroup cyclic(const BigInt& n);  // Z/n, n >= 1 (n = 1 gives trivial)
    static AbGroup divisible(std::uint64_t rank);
    static AbGroup omega_cyclic(const BigInt& d);  // (Z/d)^w, d >= 1
    static AbGroup of(std::vector<BigInt> torsion, Card free_rank, std::uint64_t divisible_rank);

    const std::vector<BigInt>& invariant_factors() const { return torsion_; }
    const std::vector<BigInt>& omega_prime_powers() const { return omega_torsion_; }
    Card free_rank() const { return free_; }
    std::uint64_t divisible_rank() const { return divisible_; }

    bool is_trivial() const {
        return torsion_.empty() && omega_torsion_.empty() && free_.is_zero() && divisible_ == 0;
    }

    AbGroup direct_sum(const AbGroup& o) const;

    // G/dG, computed componentwise; d >= 1.
    AbGroup quotient_by(const BigInt& d) const;

    // {x in G : dx = 0}, componentwise; d = 0 yields G itself.
    AbGroup annihilated_by(const BigInt& d) const;

    bool operator==(const AbGroup&) const = default;

    // Display form, e.g. "Z/2 + Z/6 + Z^3 + D^1" or "0".
    std::string to_string() const;

private:
    std::vector<BigInt> torsion_;
    std::vector<BigInt> omega_torsion_;
    Card free_ = Card::of(0);
    std::uint64_t divisible_ = 0;

    void canonicalize();
};

inline bool groups_isomorphic(const AbGroup& a, const AbGroup& b) { return a == b; }

// Parses "0", "Z", "Z^3", "Z^w", "Z/6", "(Z/6)^2", "(Z/6)^w", "D", "D^2" and
// '+'-separated sums thereof.  Throws std::invalid_argument.
AbGroup parse_abgroup(const std::string& text);

}  // namespace gac
