#include "qpv/strategy_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "qpv/errors.h"

namespace qpv {

static_assert(std::endian::native == std::endian::little, "strategy files assume a little-endian host");

namespace {

constexpr char kMagic[4] = {'Q', 'P', 'V', 'S'};
constexpr std::uint32_t kMaxCount = 1u << 24;

template <typename T>
void put(std::ostream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) {
        throw std::invalid_argument("strategy file truncated");
    }
    return v;
}

void put_matrix(std::ostream& out, const Matrix& m) {
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        for (Eigen::Index c = 0; c < m.cols(); c++) {
            put(out, m(r, c).real());
            put(out, m(r, c).imag());
        }
    }
}

Matrix get_matrix(std::istream& in, int width) {
    Eigen::Index dim = Eigen::Index{1} << width;
    Matrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; r++) {
        for (Eigen::Index c = 0; c < dim; c++) {
            double re = get<double>(in);
            double im = get<double>(in);
            m(r, c) = Complex(re, im);
        }
    }
    return m;
}

std::uint32_t get_count(std::istream& in, const char* what) {
    auto c = get<std::uint32_t>(in);
    if (c > kMaxCount) {
        throw std::invalid_argument(std::string("strategy file: implausible ") + what + " count");
    }
    return c;
}

void put_ops(std::ostream& out, const std::vector<Matrix>& ops) {
    put(out, static_cast<std::uint32_t>(ops.size()));
    for (const auto& u : ops) {
        put_matrix(out, u);
    }
}

std::vector<Matrix> get_ops(std::istream& in, int width, const char* what) {
    std::uint32_t count = get_count(in, what);
    std::vector<Matrix> ops;
    for (std::uint32_t i = 0; i < count; i++) {
        ops.push_back(get_matrix(in, width));
    }
    return ops;
}

}  // namespace

void write_strategy(std::ostream& out, const Strategy& s) {
    s.validate();
    out.write(kMagic, 4);
    put(out, kStrategyFormatVersion);
    put(out, static_cast<std::uint8_t>(s.kind));
    put(out, static_cast<std::uint8_t>(s.response_index));
    for (int v : {s.n, s.m, s.q, s.a_keep, s.a_comm, s.b_keep, s.b_comm}) {
        put(out, static_cast<std::int32_t>(v));
    }
    put(out, static_cast<std::uint32_t>(s.name.size()));
    out.write(s.name.data(), static_cast<std::streamsize>(s.name.size()));
    for (Eigen::Index k = 0; k < s.state.amplitudes().size(); k++) {
        put(out, s.state.amplitudes()[k].real());
        put(out, s.state.amplitudes()[k].imag());
    }
    put_ops(out, s.alice_unitaries);
    put_ops(out, s.bob_unitaries);
    if (s.kind == StrategyKind::bb84) {
        put(out, static_cast<std::uint32_t>(s.alice_povms.size()));
        for (std::size_t slot = 0; slot < s.alice_povms.size(); slot++) {
            for (const auto& e : s.alice_povms[slot]) {
                put_matrix(out, e);
            }
            for (const auto& e : s.bob_povms[slot]) {
                put_matrix(out, e);
            }
        }
    } else {
        put(out, static_cast<std::uint32_t>(s.alice_routing.size()));
        for (const auto& k : s.alice_routing) {
            put_matrix(out, k);
        }
        for (const auto& l : s.bob_routing) {
            put_matrix(out, l);
        }
        for (int o : s.alice_outputs) {
            put(out, static_cast<std::int32_t>(o));
        }
        for (int o : s.bob_outputs) {
            put(out, static_cast<std::int32_t>(o));
        }
    }
}

Strategy read_strategy(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw std::invalid_argument("not a strategy file (bad magic)");
    }
    auto version = get<std::uint32_t>(in);
    if (version != kStrategyFormatVersion) {
        throw std::invalid_argument("unsupported strategy format version " + std::to_string(version));
    }
    Strategy s;
    auto kind = get<std::uint8_t>(in);
    auto index = get<std::uint8_t>(in);
    if (kind > 1 || index > 2) {
        throw std::invalid_argument("strategy file: bad kind or response index");
    }
    s.kind = static_cast<StrategyKind>(kind);
    s.response_index = static_cast<ResponseIndex>(index);
    int* fields[] = {&s.n, &s.m, &s.q, &s.a_keep, &s.a_comm, &s.b_keep, &s.b_comm};
    for (int* f : fields) {
        *f = get<std::int32_t>(in);
    }
    if (s.n < 0 || s.n > 12 || s.m < 1 || s.m > kMaxQubits || s.a_keep < 0 || s.a_comm < 0 || s.b_keep < 0 ||
        s.b_comm < 0 || s.total_qubits() > kMaxQubits) {
        throw std::invalid_argument("strategy file: header widths out of range");
    }
    std::uint32_t name_len = get_count(in, "name");
    s.name.resize(name_len);
    in.read(s.name.data(), name_len);
    if (!in) {
        throw std::invalid_argument("strategy file truncated");
    }
    Amplitudes amps(Eigen::Index{1} << s.total_qubits());
    for (Eigen::Index k = 0; k < amps.size(); k++) {
        double re = get<double>(in);
        double im = get<double>(in);
        amps[k] = Complex(re, im);
    }
    s.state = StateVector(Strategy::make_layout(s.m, s.a_keep, s.a_comm, s.b_keep, s.b_comm), amps);
    s.alice_unitaries = get_ops(in, s.a_width(), "U^x");
    s.bob_unitaries = get_ops(in, s.b_width(), "V^y");
    std::uint32_t slots = get_count(in, "response slot");
    if (slots != s.response_slots()) {
        throw std::invalid_argument("strategy file: response slot count does not match the header");
    }
    if (s.kind == StrategyKind::bb84) {
        const std::size_t outcomes = std::size_t{1} << s.m;
        for (std::uint32_t slot = 0; slot < slots; slot++) {
            std::vector<Matrix> af, bf;
            for (std::size_t a = 0; a < outcomes; a++) {
                af.push_back(get_matrix(in, s.a_prime_width()));
            }
            for (std::size_t a = 0; a < outcomes; a++) {
                bf.push_back(get_matrix(in, s.b_prime_width()));
            }
            s.alice_povms.push_back(std::move(af));
            s.bob_povms.push_back(std::move(bf));
        }
    } else {
        for (std::uint32_t slot = 0; slot < slots; slot++) {
            s.alice_routing.push_back(get_matrix(in, s.a_prime_width()));
        }
        for (std::uint32_t slot = 0; slot < slots; slot++) {
            s.bob_routing.push_back(get_matrix(in, s.b_prime_width()));
        }
        for (int i = 0; i < s.m; i++) {
            s.alice_outputs.push_back(get<std::int32_t>(in));
        }
        for (int i = 0; i < s.m; i++) {
            s.bob_outputs.push_back(get<std::int32_t>(in));
        }
    }
    s.validate();
    return s;
}

void save_strategy(const std::string& path, const Strategy& s) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open '" + path + "' for writing");
    }
    write_strategy(out, s);
    if (!out) {
        throw IoError("write to '" + path + "' failed");
    }
}

Strategy load_strategy(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open '" + path + "'");
    }
    return read_strategy(in);
}

}  // namespace qpv
