#include "qpv/function_table.h"

#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "qpv/rng.h"

namespace qpv {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

void check_sizes(int n, int m) {
    if (n < 1 || m < 1) {
        throw std::invalid_argument("function table needs n >= 1 and m >= 1");
    }
}

void check_explicit(int n, int m) {
    check_sizes(n, m);
    if (n > kMaxExplicitN) {
        throw std::invalid_argument(
            "explicit function tables need n <= " + std::to_string(kMaxExplicitN) + " (got " + std::to_string(n) +
            ")");
    }
    if (m > kMaxExplicitM) {
        throw std::invalid_argument("explicit function tables need m <= 64");
    }
}

std::uint64_t output_mask(int m) {
    return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
}

std::uint64_t absorb(std::uint64_t state, std::uint64_t chunk, std::uint64_t k) {
    return splitmix64_mix(state ^ splitmix64_mix(chunk + (k + 1) * kGolden));
}

// Lex index of the first m <= 64 output bits.
std::uint64_t squeeze_index(std::uint64_t state, int m) {
    std::uint64_t word = splitmix64_mix(state + kGolden);
    return m == 64 ? word : word >> (64 - m);
}

}  // namespace

std::vector<std::uint64_t> seeded_words(std::uint64_t seed, const BitString& xy, int words) {
    std::uint64_t state = splitmix64_mix(seed + kGolden);
    for (std::size_t start = 0, k = 0; start < xy.size(); start += 64, k++) {
        std::size_t len = std::min<std::size_t>(64, xy.size() - start);
        state = absorb(state, xy.slice(start, len).lex_index(), k);
    }
    std::vector<std::uint64_t> out(words);
    for (int j = 0; j < words; j++) {
        out[j] = splitmix64_mix(state + (j + 1) * kGolden);
    }
    return out;
}

FunctionTable FunctionTable::from_table(int n, int m, std::vector<std::uint64_t> outputs) {
    check_explicit(n, m);
    if (outputs.size() != (std::size_t{1} << (2 * n))) {
        throw std::invalid_argument(
            "function table for n=" + std::to_string(n) + " needs " + std::to_string(std::size_t{1} << (2 * n)) +
            " entries, got " + std::to_string(outputs.size()));
    }
    for (auto v : outputs) {
        if (v & ~output_mask(m)) {
            throw std::invalid_argument("function table entry exceeds m bits");
        }
    }
    FunctionTable f(n, m);
    f.outputs_ = std::move(outputs);
    return f;
}

FunctionTable FunctionTable::seeded(int n, int m, std::uint64_t seed) {
    check_sizes(n, m);
    FunctionTable f(n, m);
    f.seeded_ = true;
    f.seed_ = seed;
    return f;
}

FunctionTable FunctionTable::from_rule(
    int n, int m, const std::function<BitString(const BitString&, const BitString&)>& rule) {
    check_explicit(n, m);
    std::vector<std::uint64_t> out(std::size_t{1} << (2 * n));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); x++) {
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << n); y++) {
            BitString z = rule(BitString::from_lex_index(x, n), BitString::from_lex_index(y, n));
            if (z.size() != static_cast<std::size_t>(m)) {
                throw std::invalid_argument("rule output has wrong width");
            }
            out[(x << n) | y] = z.lex_index();
        }
    }
    return from_table(n, m, std::move(out));
}

FunctionTable FunctionTable::constant(int n, const BitString& z0) {
    return from_rule(n, static_cast<int>(z0.size()), [&](const BitString&, const BitString&) { return z0; });
}

FunctionTable FunctionTable::xor_function(int n) {
    return from_rule(n, n, [](const BitString& x, const BitString& y) {
        BitString z(x.size());
        for (std::size_t i = 0; i < x.size(); i++) {
            z.set(i, x[i] != y[i]);
        }
        return z;
    });
}

FunctionTable FunctionTable::select_y(int n) {
    return from_rule(n, n, [](const BitString&, const BitString& y) { return y; });
}

BitString FunctionTable::operator()(const BitString& x, const BitString& y) const {
    if (x.size() != static_cast<std::size_t>(n_) || y.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("function input width does not match n=" + std::to_string(n_));
    }
    if (!seeded_) {
        return BitString::from_lex_index(outputs_[(x.lex_index() << n_) | y.lex_index()], m_);
    }
    int words = (m_ + 63) / 64;
    auto w = seeded_words(seed_, x.concat(y), words);
    BitString z(m_);
    for (int i = 0; i < m_; i++) {
        z.set(i, (w[i / 64] >> (63 - i % 64)) & 1);
    }
    return z;
}

std::uint64_t FunctionTable::eval_index(std::uint64_t x, std::uint64_t y) const {
    if (n_ > 32 || m_ > 64) {
        throw std::invalid_argument("eval_index needs n <= 32 and m <= 64");
    }
    if ((x >> n_) != 0 || (y >> n_) != 0) {
        throw std::invalid_argument("eval_index input out of range");
    }
    if (!seeded_) {
        return outputs_[(x << n_) | y];
    }
    std::uint64_t state = absorb(splitmix64_mix(seed_ + kGolden), (x << n_) | y, 0);
    return squeeze_index(state, m_);
}

FunctionTable FunctionTable::materialize() const {
    if (!seeded_) {
        return *this;
    }
    check_explicit(n_, m_);
    std::vector<std::uint64_t> out(std::size_t{1} << (2 * n_));
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n_); x++) {
        for (std::uint64_t y = 0; y < (std::uint64_t{1} << n_); y++) {
            out[(x << n_) | y] = eval_index(x, y);
        }
    }
    return from_table(n_, m_, std::move(out));
}

FunctionTable FunctionTable::permute_outputs(const std::vector<int>& perm) const {
    if (perm.size() != static_cast<std::size_t>(m_)) {
        throw std::invalid_argument("permutation length must equal m");
    }
    std::vector<bool> seen(m_, false);
    for (int p : perm) {
        if (p < 0 || p >= m_ || seen[p]) {
            throw std::invalid_argument("not a permutation of output positions");
        }
        seen[p] = true;
    }
    FunctionTable base = materialize();
    std::vector<std::uint64_t> out(base.outputs_.size());
    for (std::size_t i = 0; i < out.size(); i++) {
        BitString old = BitString::from_lex_index(base.outputs_[i], m_);
        BitString z(m_);
        for (int k = 0; k < m_; k++) {
            z.set(k, old[perm[k]]);
        }
        out[i] = z.lex_index();
    }
    return from_table(n_, m_, std::move(out));
}

void FunctionTable::write(std::ostream& out) const {
    out << n_ << " " << m_ << "\n";
    if (seeded_) {
        std::ostringstream hex;
        hex << std::hex << std::setw(16) << std::setfill('0') << seed_;
        out << "seeded " << hex.str() << "\n";
        return;
    }
    for (auto v : outputs_) {
        out << BitString::from_lex_index(v, m_).to_string() << "\n";
    }
}

FunctionTable FunctionTable::read(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("function file: missing 'n m' header");
    }
    std::istringstream header(line);
    int n = 0;
    int m = 0;
    std::string extra;
    if (!(header >> n >> m) || (header >> extra)) {
        throw std::invalid_argument("function file: malformed header '" + line + "'");
    }
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (!line.empty()) {
            lines.push_back(line);
        }
    }
    if (lines.size() == 1 && lines[0].rfind("seeded ", 0) == 0) {
        std::string hex = lines[0].substr(7);
        std::size_t used = 0;
        std::uint64_t seed = 0;
        try {
            seed = std::stoull(hex, &used, 16);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != hex.size()) {
            throw std::invalid_argument("function file: bad seed '" + hex + "'");
        }
        return seeded(n, m, seed);
    }
    check_explicit(n, m);
    std::vector<std::uint64_t> outputs;
    outputs.reserve(lines.size());
    for (const auto& l : lines) {
        BitString z = BitString::parse(l);
        if (z.size() != static_cast<std::size_t>(m)) {
            throw std::invalid_argument("function file: output '" + l + "' is not " + std::to_string(m) + " bits");
        }
        outputs.push_back(z.lex_index());
    }
    return from_table(n, m, std::move(outputs));
}

void FunctionTable::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write(out);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

FunctionTable FunctionTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return read(in);
}

}  // namespace qpv
