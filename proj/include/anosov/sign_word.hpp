#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "anosov/errors.hpp"

namespace anosov {

enum class Sign : std::int8_t { Plus = 1, Minus = -1 };

inline Sign operator*(Sign a, Sign b) {
    return static_cast<int>(a) * static_cast<int>(b) > 0 ? Sign::Plus : Sign::Minus;
}
inline Sign operator-(Sign a) { return a == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline int as_int(Sign s) { return static_cast<int>(s); }
inline char as_char(Sign s) { return s == Sign::Plus ? '+' : '-'; }

// Word of relative contracting orientations, first letter always +.
class SignWord {
public:
    SignWord() = default;

    explicit SignWord(std::vector<Sign> signs) : signs_(std::move(signs)) {
        if (signs_.empty()) throw MalformedInput("sign word must be non-empty");
        if (signs_[0] != Sign::Plus) throw MalformedInput("sign word must start with +");
    }

    // Accepts '+', '-' and the unicode minus sign.
    static SignWord parse(const std::string& text) {
        std::vector<Sign> out;
        for (std::size_t i = 0; i < text.size(); ++i) {
            unsigned char c = static_cast<unsigned char>(text[i]);
            if (c == '+') {
                out.push_back(Sign::Plus);
            } else if (c == '-') {
                out.push_back(Sign::Minus);
            } else if (c == 0xE2 && i + 2 < text.size() &&
                       static_cast<unsigned char>(text[i + 1]) == 0x88 &&
                       static_cast<unsigned char>(text[i + 2]) == 0x92) {
                out.push_back(Sign::Minus);
                i += 2;
            } else if (c == ' ' || c == ',') {
                continue;
            } else {
                throw MalformedInput("bad character in sign word '" + text + "'");
            }
        }
        return SignWord(std::move(out));
    }

    std::size_t size() const { return signs_.size(); }
    Sign operator[](std::size_t i) const { return signs_[i]; }
    const std::vector<Sign>& signs() const { return signs_; }

    bool coherent() const {
        for (Sign s : signs_)
            if (s != Sign::Plus) return false;
        return true;
    }

    std::size_t incoherent_count() const {
        std::size_t c = 0;
        for (Sign s : signs_) c += (s == Sign::Minus);
        return c;
    }

    SignWord appended(Sign s) const {
        auto v = signs_;
        v.push_back(s);
        return SignWord(std::move(v));
    }

    SignWord prefix(std::size_t n) const {
        return SignWord(std::vector<Sign>(signs_.begin(), signs_.begin() + n));
    }

    std::string str() const {
        std::string s;
        for (Sign x : signs_) s += as_char(x);
        return s;
    }

    friend bool operator==(const SignWord& a, const SignWord& b) { return a.signs_ == b.signs_; }
    friend bool operator<(const SignWord& a, const SignWord& b) {
        // + < -
        return std::lexicographical_compare(
            a.signs_.begin(), a.signs_.end(), b.signs_.begin(), b.signs_.end(),
            [](Sign x, Sign y) { return as_int(x) > as_int(y); });
    }

private:
    std::vector<Sign> signs_;
};

// Word read from base index k: forward when w[k] = +, backward otherwise.
inline SignWord reenumerate(const SignWord& w, std::size_t k) {
    std::size_t n = w.size();
    std::vector<Sign> out(n);
    Sign base = w[k];
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t j = base == Sign::Plus ? (k + i) % n : (k + n - i % n) % n;
        out[i] = w[j] * base;
    }
    return SignWord(std::move(out));
}

struct CombinatorialType {
    SignWord canonical;
    std::size_t n = 0;

    friend bool operator==(const CombinatorialType& a, const CombinatorialType& b) {
        return a.canonical == b.canonical;
    }
};

inline CombinatorialType canonical_type(const SignWord& w) {
    if (w.size() == 0) throw MalformedInput("empty sign word");
    SignWord best = w;
    for (std::size_t k = 0; k < w.size(); ++k) {
        SignWord r = reenumerate(w, k);
        if (r < best) best = r;
    }
    return {best, w.size()};
}

inline bool types_equivalent(const SignWord& a, const SignWord& b) {
    if (a.size() != b.size()) return false;
    return canonical_type(a) == canonical_type(b);
}

// All canonical words of length n, in lexicographic order.
inline std::vector<SignWord> canonical_words(std::size_t n) {
    std::vector<SignWord> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << (n - 1)); ++mask) {
        std::vector<Sign> v(n, Sign::Plus);
        for (std::size_t i = 1; i < n; ++i)
            if (mask >> (n - 1 - i) & 1) v[i] = Sign::Minus;
        SignWord w(std::move(v));
        if (canonical_type(w).canonical == w) out.push_back(w);
    }
    return out;
}

// Slope-sign profile of the non-compact leaves of one band.
enum class BandProfile { Pos, Neg, PosNeg, NegPos };

inline const char* to_string(BandProfile b) {
    switch (b) {
        case BandProfile::Pos: return "Pos";
        case BandProfile::Neg: return "Neg";
        case BandProfile::PosNeg: return "PosNeg";
        case BandProfile::NegPos: return "NegPos";
    }
    return "?";
}

// Profile from the absolute contracting orientations of the two bounding
// leaves (left leaf, right leaf in the x order).
inline BandProfile band_profile(Sign left, Sign right) {
    if (left == Sign::Plus && right == Sign::Plus) return BandProfile::NegPos;
    if (left == Sign::Minus && right == Sign::Minus) return BandProfile::PosNeg;
    if (left == Sign::Plus) return BandProfile::Neg;
    return BandProfile::Pos;
}

// Slope signs on the left and right half of the band.
inline Sign left_half_sign(BandProfile b) {
    return (b == BandProfile::Pos || b == BandProfile::PosNeg) ? Sign::Plus : Sign::Minus;
}
inline Sign right_half_sign(BandProfile b) {
    return (b == BandProfile::Pos || b == BandProfile::NegPos) ? Sign::Plus : Sign::Minus;
}

enum class Side { Entrance, Exit };

inline const char* to_string(Side s) { return s == Side::Entrance ? "entrance" : "exit"; }

// Orientations as +1 (up) / -1 (down) along the leaf.
inline Sign dynamical_to_contracting(Side side, Sign dynamical) {
    return side == Side::Exit ? dynamical : -dynamical;
}

}  // namespace anosov
