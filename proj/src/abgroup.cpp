#include "gac/abgroup.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gac {

namespace {

BigInt big_gcd(const BigInt& a, const BigInt& b) { return boost::multiprecision::gcd(a, b); }

// Prime-power factorization by trial division.  The inputs here are invariant
// factors of desk-scale matrices (or user-typed unit groups), so a fixed trial
// bound suffices; anything with a large composite cofactor is rejected rather
// than guessed at.
std::vector<BigInt> prime_power_parts(const BigInt& n_in) {
    constexpr std::uint64_t kTrialBound = 10'000'000;
    std::vector<BigInt> parts;
    BigInt n = n_in;
    if (n <= 1) return parts;
    for (std::uint64_t p = 2; p <= kTrialBound && BigInt(p) * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            BigInt q = 1;
            while (n % p == 0) {
                n /= p;
                q *= p;
            }
            parts.push_back(q);
        }
    }
    if (n > 1) {
        if (n > BigInt(kTrialBound) * kTrialBound)
            throw std::invalid_argument("torsion factor too large to factor: " + n_in.str());
        parts.push_back(n);  // prime residue
    }
    return parts;
}

}  // namespace

AbGroup AbGroup::free(Card rank) {
    AbGroup g;
    g.free_ = rank;
    return g;
}

AbGroup AbGroup::cyclic(const BigInt& n) {
    if (n < 1) throw std::invalid_argument("cyclic order must be >= 1");
    AbGroup g;
    if (n > 1) g.torsion_.push_back(n);
    return g;
}

AbGroup AbGroup::divisible(std::uint64_t rank) {
    AbGroup g;
    g.divisible_ = rank;
    return g;
}

AbGroup AbGroup::omega_cyclic(const BigInt& d) {
    if (d < 1) throw std::invalid_argument("cyclic order must be >= 1");
    AbGroup g;
    if (d > 1) {
        g.omega_torsion_ = prime_power_parts(d);
        std::sort(g.omega_torsion_.begin(), g.omega_torsion_.end());
    }
    return g;
}

AbGroup AbGroup::of(std::vector<BigInt> torsion, Card free_rank, std::uint64_t divisible_rank) {
    AbGroup g;
    g.torsion_ = std::move(torsion);
    g.free_ = free_rank;
    g.divisible_ = divisible_rank;
    g.canonicalize();
    return g;
}

AbGroup AbGroup::direct_sum(const AbGroup& o) const {
    AbGroup g;
    g.torsion_ = torsion_;
    g.torsion_.insert(g.torsion_.end(), o.torsion_.begin(), o.torsion_.end());
    g.omega_torsion_ = omega_torsion_;
    g.omega_torsion_.insert(g.omega_torsion_.end(), o.omega_torsion_.begin(),
                            o.omega_torsion_.end());
    g.free_ = free_ + o.free_;
    g.divisible_ = divisible_ + o.divisible_;
    g.canonicalize();
    return g;
}

AbGroup AbGroup::quotient_by(const BigInt& d) const {
    if (d < 1) throw std::invalid_argument("quotient_by needs d >= 1");
    AbGroup g;
    if (d == 1) return g;
    for (const BigInt& q : torsion_) g.torsion_.push_back(big_gcd(d, q));
    for (const BigInt& q : omega_torsion_) {
        BigInt r = big_gcd(d, q);  // gcd of d with a prime power is a prime power
        if (r > 1) g.omega_torsion_.push_back(r);
    }
    if (free_.omega) {
        for (const BigInt& q : prime_power_parts(d)) g.omega_torsion_.push_back(q);
    } else {
        for (std::uint64_t i = 0; i < free_.value; ++i) g.torsion_.push_back(d);
    }
    // divisible summands vanish in every quotient by d >= 1
    g.canonicalize();
    return g;
}

AbGroup AbGroup::annihilated_by(const BigInt& d) const {
    if (d < 0) throw std::invalid_argument("annihilated_by needs d >= 0");
    if (d == 0) return *this;
    AbGroup g;
    for (const BigInt& q : torsion_) g.torsion_.push_back(big_gcd(d, q));
    for (const BigInt& q : omega_torsion_) {
        BigInt r = big_gcd(d, q);
        if (r > 1) g.omega_torsion_.push_back(r);
    }
    // free and divisible summands are torsion-free: no d-torsion
    g.canonicalize();
    return g;
}

void AbGroup::canonicalize() {
    for (const BigInt& t : torsion_)
        if (t < 1) throw std::invalid_argument("torsion factor must be >= 1");
    std::erase(torsion_, BigInt(1));

    // Invariant-factor chain via repeated (gcd, lcm) replacement; no factoring.
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < torsion_.size(); ++i) {
            for (std::size_t j = i + 1; j < torsion_.size(); ++j) {
                if (torsion_[j] % torsion_[i] == 0) continue;
                BigInt g = big_gcd(torsion_[i], torsion_[j]);
                BigInt l = torsion_[i] / g * torsion_[j];
                torsion_[i] = g;
                torsion_[j] = l;
                changed = true;
            }
        }
    }
    std::erase(torsion_, BigInt(1));
    std::sort(torsion_.begin(), torsion_.end());

    if (!omega_torsion_.empty()) {
        // Deduplicate the prime powers (w + w = w copies).
        std::sort(omega_torsion_.begin(), omega_torsion_.end());
        omega_torsion_.erase(std::unique(omega_torsion_.begin(), omega_torsion_.end()),
                             omega_torsion_.end());
        // Absorb finite summands that coincide with an omega prime power:
        // (Z/q)^w + Z/q = (Z/q)^w.  A finite factor f sheds exactly those of
        // its prime-power components that appear in the omega set.
        std::vector<BigInt> kept;
        for (const BigInt& f : torsion_) {
            BigInt reduced = f;
            for (const BigInt& q : prime_power_parts(f)) {
                if (std::binary_search(omega_torsion_.begin(), omega_torsion_.end(), q))
                    reduced /= q;
            }
            if (reduced > 1) kept.push_back(reduced);
        }
        if (kept != torsion_) {
            torsion_ = std::move(kept);
            // absorption can break the divisibility chain; rebuild it
            bool again = true;
            while (again) {
                again = false;
                for (std::size_t i = 0; i < torsion_.size(); ++i)
                    for (std::size_t j = i + 1; j < torsion_.size(); ++j) {
                        if (torsion_[j] % torsion_[i] == 0) continue;
                        BigInt g = big_gcd(torsion_[i], torsion_[j]);
                        BigInt l = torsion_[i] / g * torsion_[j];
                        torsion_[i] = g;
                        torsion_[j] = l;
                        again = true;
                    }
            }
            std::erase(torsion_, BigInt(1));
            std::sort(torsion_.begin(), torsion_.end());
        }
    }
}

std::string AbGroup::to_string() const {
    std::vector<std::string> terms;
    for (const BigInt& t : torsion_) terms.push_back("Z/" + t.str());
    for (const BigInt& q : omega_torsion_) terms.push_back("(Z/" + q.str() + ")^w");
    if (free_.omega)
        terms.push_back("Z^w");
    else if (free_.value == 1)
        terms.push_back("Z");
    else if (free_.value > 1)
        terms.push_back("Z^" + std::to_string(free_.value));
    if (divisible_ > 0) terms.push_back("D^" + std::to_string(divisible_));
    if (terms.empty()) return "0";
    std::string out = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) out += " + " + terms[i];
    return out;
}

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

BigInt parse_big(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty number in group expression");
    for (char c : s)
        if (c < '0' || c > '9') throw std::invalid_argument("bad number '" + s + "'");
    return BigInt(s);
}

// One term: Z | Z^k | Z^w | Z/d | (Z/d)^k | (Z/d)^w | D | D^k | 0
AbGroup parse_term(const std::string& raw) {
    std::string t = strip(raw);
    if (t.empty()) throw std::invalid_argument("empty term in group expression");
    if (t == "0") return AbGroup::trivial();

    auto split_exponent = [](const std::string& s, std::string& base, std::string& exp) {
        std::size_t caret = s.rfind('^');
        if (caret == std::string::npos) {
            base = s;
            exp = "";
        } else {
            base = strip(s.substr(0, caret));
            exp = strip(s.substr(caret + 1));
        }
    };

    std::string base, exp;
    split_exponent(t, base, exp);
    if (!base.empty() && base.front() == '(' && base.back() == ')')
        base = strip(base.substr(1, base.size() - 2));

    bool omega_exp = (exp == "w");
    std::uint64_t count = 1;
    if (!exp.empty() && !omega_exp) {
        BigInt e = parse_big(exp);
        if (e < 0 || e > 1'000'000) throw std::invalid_argument("bad exponent '" + exp + "'");
        count = e.convert_to<std::uint64_t>();
    }

    if (base == "Z") {
        if (omega_exp) return AbGroup::free(Card::inf());
        return AbGroup::free(Card::of(count));
    }
    if (base == "D") {
        if (omega_exp) throw std::invalid_argument("D^w is not supported");
        return AbGroup::divisible(count);
    }
    if (base.rfind("Z/", 0) == 0) {
        BigInt d = parse_big(strip(base.substr(2)));
        if (d < 1) throw std::invalid_argument("bad torsion order in '" + t + "'");
        if (omega_exp) return AbGroup::omega_cyclic(d);
        std::vector<BigInt> tor(count, d);
        return AbGroup::of(std::move(tor), Card::of(0), 0);
    }
    throw std::invalid_argument("cannot parse group term '" + t + "'");
}

}  // namespace

AbGroup parse_abgroup(const std::string& text) {
    AbGroup g;
    std::string cur;
    int depth = 0;
    bool any = false;
    for (char c : text) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '+' && depth == 0) {
            g = g.direct_sum(parse_term(cur));
            cur.clear();
            any = true;
        } else {
            cur += c;
        }
    }
    if (!strip(cur).empty() || !any) g = g.direct_sum(parse_term(cur));
    return g;
}

}  // namespace gac
