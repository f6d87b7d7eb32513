#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace cftk {

// Binary linear code of length n <= 64, rows kept in row-reduced form.
struct BinaryCode {
    int length = 0;
    std::vector<std::uint64_t> gens;  // independent rows, bit i = coordinate i

    int dim() const { return static_cast<int>(gens.size()); }

    // row-reduce and drop dependent rows
    void reduce() {
        std::vector<std::uint64_t> rows = gens;
        std::vector<std::uint64_t> basis;
        for (std::uint64_t r : rows) {
            for (std::uint64_t b : basis) r = std::min(r, r ^ b);
            if (r) basis.push_back(r);
            std::sort(basis.rbegin(), basis.rend());
        }
        gens = basis;
    }

    std::vector<std::uint64_t> codewords() const {
        if (dim() > 20) throw std::runtime_error("codeword enumeration over 2^20 refused");
        std::vector<std::uint64_t> words{0};
        words.reserve(1ull << dim());
        for (std::uint64_t g : gens) {
            std::size_t sz = words.size();
            for (std::size_t i = 0; i < sz; ++i) words.push_back(words[i] ^ g);
        }
        return words;
    }

    bool contains(std::uint64_t w) const {
        for (std::uint64_t b : gens) w = std::min(w, w ^ b);
        return w == 0;
    }
};

inline int weight(std::uint64_t w) { return std::popcount(w); }
inline int dot(std::uint64_t a, std::uint64_t b) { return std::popcount(a & b); }

inline BinaryCode code_from_rows(int length, std::vector<std::uint64_t> rows) {
    if (length <= 0 || length > 64) throw std::invalid_argument("code length must be 1..64");
    BinaryCode c{length, std::move(rows)};
    for (std::uint64_t r : c.gens)
        if (length < 64 && (r >> length)) throw std::invalid_argument("generator exceeds code length");
    c.reduce();
    return c;
}

inline BinaryCode code_from_strings(int length, const std::vector<std::string>& rows) {
    std::vector<std::uint64_t> bits;
    for (const auto& s : rows) {
        if (static_cast<int>(s.size()) != length) throw std::invalid_argument("generator length mismatch");
        std::uint64_t w = 0;
        for (int i = 0; i < length; ++i) {
            if (s[static_cast<std::size_t>(i)] == '1') w |= (1ull << i);
            else if (s[static_cast<std::size_t>(i)] != '0') throw std::invalid_argument("generator must be 0/1");
        }
        bits.push_back(w);
    }
    return code_from_rows(length, std::move(bits));
}

// Extended binary Golay code: cyclic shifts of the [23,12,7] generator
// polynomial x^11 + x^10 + x^6 + x^5 + x^4 + x^2 + 1 plus an overall parity
// bit in coordinate 23.
inline BinaryCode golay24() {
    std::uint64_t g = 0;
    for (int e : {0, 2, 4, 5, 6, 10, 11}) g |= 1ull << e;
    std::vector<std::uint64_t> rows;
    for (int i = 0; i < 12; ++i) {
        std::uint64_t w = g << i;
        if (weight(w) % 2 != 0) w |= 1ull << 23;
        rows.push_back(w);
    }
    return code_from_rows(24, std::move(rows));
}

inline BinaryCode builtin_code(const std::string& name) {
    if (name == "hamming8") {
        return code_from_strings(8, {"11110000", "00111100", "00001111", "01010101"});
    }
    if (name == "golay24") return golay24();
    if (name.rfind("repetition(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(11, name.size() - 12));
        if (n < 1 || n > 64) throw std::invalid_argument("repetition length out of range");
        return code_from_rows(n, {n == 64 ? ~0ull : ((1ull << n) - 1)});
    }
    if (name.rfind("trivial(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(8, name.size() - 9));
        if (n < 1 || n > 64) throw std::invalid_argument("trivial length out of range");
        return code_from_rows(n, {});
    }
    if (name.rfind("pair11(", 0) == 0 && name.back() == ')') {
        int n = std::stoi(name.substr(7, name.size() - 8));
        if (n < 2 || n > 64 || n % 2 != 0) throw std::invalid_argument("pair11 needs even length 2..64");
        std::vector<std::uint64_t> rows;
        for (int i = 0; i < n; i += 2) rows.push_back(3ull << i);
        return code_from_rows(n, std::move(rows));
    }
    throw std::invalid_argument("unknown builtin code: " + name);
}

struct CodePredicates {
    bool even = true;
    bool doubly_even = true;
    bool self_orthogonal = true;
    bool self_dual = false;
};

// Self-orthogonality on generator pairs suffices (bilinearity); evenness and
// double-evenness need all codewords unless the code is self-orthogonal, so
// we enumerate when feasible and fall back to the generator criterion.
inline CodePredicates code_predicates(const BinaryCode& c) {
    CodePredicates p;
    bool gens_doubly = true;
    for (std::size_t i = 0; i < c.gens.size(); ++i) {
        if (weight(c.gens[i]) % 4 != 0) gens_doubly = false;
        for (std::size_t j = i; j < c.gens.size(); ++j)
            if (dot(c.gens[i], c.gens[j]) % 2 != 0) p.self_orthogonal = false;
    }
    if (c.dim() <= 20) {
        for (std::uint64_t w : c.codewords()) {
            if (weight(w) % 2 != 0) p.even = false;
            if (weight(w) % 4 != 0) p.doubly_even = false;
        }
    } else {
        // w(a+b) = w(a)+w(b)-2 a.b: generator criteria propagate when the
        // pairwise dots are even
        p.even = p.self_orthogonal;
        p.doubly_even = gens_doubly && p.self_orthogonal;
    }
    p.self_dual = p.self_orthogonal && (2 * c.dim() == c.length);
    return p;
}

struct RrefF2 {
    std::vector<std::uint64_t> rows;  // fully reduced, one pivot per row
    std::vector<int> pivot_of_row;
};

inline RrefF2 rref_f2(int n, std::vector<std::uint64_t> rows) {
    RrefF2 out;
    std::size_t r = 0;
    for (int col = 0; col < n && r < rows.size(); ++col) {
        std::size_t piv = r;
        while (piv < rows.size() && !(rows[piv] >> col & 1)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != r && (rows[i] >> col & 1)) rows[i] ^= rows[r];
        out.pivot_of_row.push_back(col);
        ++r;
    }
    rows.resize(r);
    out.rows = std::move(rows);
    return out;
}

// Kernel of the generator matrix over F2.
inline BinaryCode dual_code(const BinaryCode& c) {
    const int n = c.length;
    RrefF2 rr = rref_f2(n, c.gens);
    std::vector<bool> is_pivot(static_cast<std::size_t>(n), false);
    for (int p : rr.pivot_of_row) is_pivot[static_cast<std::size_t>(p)] = true;
    std::vector<std::uint64_t> kernel;
    for (int col = 0; col < n; ++col) {
        if (is_pivot[static_cast<std::size_t>(col)]) continue;
        std::uint64_t v = 1ull << col;
        for (std::size_t i = 0; i < rr.pivot_of_row.size(); ++i)
            if (rr.rows[i] >> col & 1) v |= 1ull << rr.pivot_of_row[i];
        kernel.push_back(v);
    }
    return code_from_rows(n, std::move(kernel));
}

}  // namespace cftk
