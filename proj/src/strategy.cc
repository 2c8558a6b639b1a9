#include "qpv/strategy.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qpv {

std::string to_string(StrategyKind k) {
    return k == StrategyKind::bb84 ? "bb84" : "routing";
}

Layout Strategy::make_layout(int m, int a_keep, int a_comm, int b_keep, int b_comm) {
    return Layout({{"V", m}, {"Ak", a_keep}, {"Ac", a_comm}, {"Bk", b_keep}, {"Bc", b_comm}});
}

namespace {

std::vector<int> range(int start, int count) {
    std::vector<int> out(count);
    for (int i = 0; i < count; i++) {
        out[i] = start + i;
    }
    return out;
}

std::vector<int> join(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

void check_square(const Matrix& op, int width, const std::string& what) {
    Eigen::Index dim = Eigen::Index{1} << width;
    if (op.rows() != dim || op.cols() != dim) {
        throw std::invalid_argument(what + ": expected a " + std::to_string(dim) + "x" + std::to_string(dim) +
                                    " operator, got " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()));
    }
}

void check_unitaries(const std::vector<Matrix>& ops, std::size_t expected, int width, const std::string& what) {
    if (ops.size() != expected) {
        throw std::invalid_argument(what + ": expected " + std::to_string(expected) + " operators, got " +
                                    std::to_string(ops.size()));
    }
    for (const auto& u : ops) {
        check_square(u, width, what);
        if (!is_unitary(u, 1e-8)) {
            throw std::invalid_argument(what + ": operator is not unitary");
        }
    }
}

}  // namespace

std::vector<int> Strategy::v_qubits() const {
    return range(0, m);
}

std::vector<int> Strategy::a_qubits() const {
    return range(m, a_width());
}

std::vector<int> Strategy::b_qubits() const {
    return range(m + a_width(), b_width());
}

std::vector<int> Strategy::a_prime_qubits() const {
    return join(range(m, a_keep), range(m + a_width() + b_keep, b_comm));
}

std::vector<int> Strategy::b_prime_qubits() const {
    return join(range(m + a_width(), b_keep), range(m + a_keep, a_comm));
}

std::size_t Strategy::response_slots() const {
    switch (response_index) {
        case ResponseIndex::constant:
            return 1;
        case ResponseIndex::by_basis:
            return std::size_t{1} << m;
        case ResponseIndex::by_pair:
            return std::size_t{1} << (2 * n);
    }
    return 1;
}

std::size_t Strategy::response_slot(std::uint64_t x, std::uint64_t y, std::uint64_t z) const {
    switch (response_index) {
        case ResponseIndex::constant:
            return 0;
        case ResponseIndex::by_basis:
            return static_cast<std::size_t>(z);
        case ResponseIndex::by_pair:
            return static_cast<std::size_t>((x << n) | y);
    }
    return 0;
}

void Strategy::validate() const {
    if (m < 1) {
        throw std::invalid_argument("strategy: m must be at least 1");
    }
    if (n < 0 || n > 12) {
        throw std::invalid_argument("strategy: n must lie in [0, 12]");
    }
    if (a_keep < 0 || a_comm < 0 || b_keep < 0 || b_comm < 0 || q < 0) {
        throw std::invalid_argument("strategy: negative register width");
    }
    if (2 * q + m > kMaxQubits) {
        throw std::invalid_argument("strategy: 2q + m exceeds " + std::to_string(kMaxQubits));
    }
    if (total_qubits() > kMaxQubits) {
        throw std::invalid_argument("strategy: " + std::to_string(total_qubits()) + " qubits exceed " +
                                    std::to_string(kMaxQubits));
    }
    if (q > std::max(a_width(), b_width())) {
        throw std::invalid_argument("strategy: declared q exceeds the attacker registers");
    }
    if (state.num_qubits() != total_qubits()) {
        throw std::invalid_argument("strategy: state has " + std::to_string(state.num_qubits()) +
                                    " qubits, layout needs " + std::to_string(total_qubits()));
    }
    const std::size_t inputs = std::size_t{1} << n;
    if (!alice_unitaries.empty()) {
        check_unitaries(alice_unitaries, inputs, a_width(), "strategy: U^x");
    }
    if (!bob_unitaries.empty()) {
        check_unitaries(bob_unitaries, inputs, b_width(), "strategy: V^y");
    }
    const std::size_t slots = response_slots();
    if (kind == StrategyKind::bb84) {
        const std::size_t outcomes = std::size_t{1} << m;
        for (auto [fams, width, who] : {std::tuple{&alice_povms, a_prime_width(), "Alice"},
                                        std::tuple{&bob_povms, b_prime_width(), "Bob"}}) {
            if (fams->size() != slots) {
                throw std::invalid_argument(std::string("strategy: ") + who + " needs " + std::to_string(slots) +
                                            " POVM families, got " + std::to_string(fams->size()));
            }
            for (const auto& fam : *fams) {
                if (fam.size() != outcomes) {
                    throw std::invalid_argument(std::string("strategy: ") + who + " POVM needs " +
                                                std::to_string(outcomes) + " elements");
                }
                for (const auto& e : fam) {
                    check_square(e, width, std::string("strategy: ") + who + " POVM element");
                }
                if (!is_povm(fam, 1e-8)) {
                    throw std::invalid_argument(std::string("strategy: ") + who +
                                                " POVM does not sum to identity or has a non-effect element");
                }
            }
        }
        if (!alice_routing.empty() || !bob_routing.empty() || !alice_outputs.empty() || !bob_outputs.empty()) {
            throw std::invalid_argument("strategy: BB84 kind carries routing operators");
        }
    } else {
        check_unitaries(alice_routing, slots, a_prime_width(), "strategy: K");
        check_unitaries(bob_routing, slots, b_prime_width(), "strategy: L");
        for (auto [outs, width, who] : {std::tuple{&alice_outputs, a_prime_width(), "Alice"},
                                        std::tuple{&bob_outputs, b_prime_width(), "Bob"}}) {
            if (outs->size() != static_cast<std::size_t>(m)) {
                throw std::invalid_argument(std::string("strategy: ") + who + " needs one output qubit per round");
            }
            std::vector<int> sorted = *outs;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
                throw std::invalid_argument(std::string("strategy: ") + who + " output qubits repeat");
            }
            for (int o : sorted) {
                if (o < 0 || o >= width) {
                    throw std::invalid_argument(std::string("strategy: ") + who + " output qubit out of range");
                }
            }
        }
        if (!alice_povms.empty() || !bob_povms.empty()) {
            throw std::invalid_argument("strategy: routing kind carries POVMs");
        }
    }
}

Matrix random_unitary(int width, Rng& rng) {
    Eigen::Index dim = Eigen::Index{1} << width;
    Matrix g(dim, dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        for (Eigen::Index j = 0; j < dim; j++) {
            g(i, j) = Complex(rng.gaussian(), rng.gaussian());
        }
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix qm = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the phases so the distribution is Haar.
    for (Eigen::Index i = 0; i < dim; i++) {
        Complex d = r(i, i);
        double a = std::abs(d);
        if (a > 0) {
            qm.col(i) *= d / a;
        }
    }
    return qm;
}

std::vector<Matrix> random_povm(int width, int outcomes, Rng& rng) {
    Eigen::Index dim = Eigen::Index{1} << width;
    std::vector<Matrix> g(outcomes);
    Matrix sum = Matrix::Zero(dim, dim);
    for (auto& e : g) {
        Matrix x(dim, dim);
        for (Eigen::Index i = 0; i < dim; i++) {
            for (Eigen::Index j = 0; j < dim; j++) {
                x(i, j) = Complex(rng.gaussian(), rng.gaussian());
            }
        }
        e = x * x.adjoint();
        sum += e;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(sum);
    Matrix inv_sqrt = es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
    for (auto& e : g) {
        e = inv_sqrt * e * inv_sqrt;
        e = (e + e.adjoint()) / 2;
    }
    return g;
}

Amplitudes random_amplitudes(int num_qubits, Rng& rng) {
    Eigen::Index dim = Eigen::Index{1} << num_qubits;
    Amplitudes a(dim);
    for (Eigen::Index i = 0; i < dim; i++) {
        a[i] = Complex(rng.gaussian(), rng.gaussian());
    }
    return a / a.norm();
}

namespace {

void split_widths(Strategy& s, int q, Rng& rng) {
    s.a_keep = static_cast<int>(rng.below(static_cast<std::uint64_t>(q) + 1));
    s.a_comm = q - s.a_keep;
    s.b_keep = static_cast<int>(rng.below(static_cast<std::uint64_t>(q) + 1));
    s.b_comm = q - s.b_keep;
}

void random_responses(Strategy& s, Rng& rng) {
    const std::size_t slots = s.response_slots();
    if (s.kind == StrategyKind::bb84) {
        for (std::size_t i = 0; i < slots; i++) {
            s.alice_povms.push_back(random_povm(s.a_prime_width(), 1 << s.m, rng));
            s.bob_povms.push_back(random_povm(s.b_prime_width(), 1 << s.m, rng));
        }
        return;
    }
    for (std::size_t i = 0; i < slots; i++) {
        s.alice_routing.push_back(random_unitary(s.a_prime_width(), rng));
        s.bob_routing.push_back(random_unitary(s.b_prime_width(), rng));
    }
    s.alice_outputs = range(0, s.m);
    s.bob_outputs = range(0, s.m);
}

}  // namespace

Strategy random_strategy(StrategyKind kind, int n, int m, int q, Rng& rng) {
    Strategy s;
    s.kind = kind;
    s.name = "random";
    s.n = n;
    s.m = m;
    s.q = q;
    if (kind == StrategyKind::routing) {
        if (q < m) {
            throw std::invalid_argument("random routing strategies need q >= m");
        }
        // Keep A' and B' at least m wide: Alice keeps a, sends q - a; Bob mirrors.
        s.a_keep = static_cast<int>(rng.below(static_cast<std::uint64_t>(q) + 1));
        s.a_comm = q - s.a_keep;
        s.b_keep = s.a_keep;
        s.b_comm = s.a_comm;
    } else {
        split_widths(s, q, rng);
    }
    s.state = StateVector(Strategy::make_layout(m, s.a_keep, s.a_comm, s.b_keep, s.b_comm),
                          random_amplitudes(s.total_qubits(), rng));
    for (int x = 0; x < (1 << n); x++) {
        s.alice_unitaries.push_back(random_unitary(s.a_width(), rng));
        s.bob_unitaries.push_back(random_unitary(s.b_width(), rng));
    }
    s.response_index = ResponseIndex::by_pair;
    random_responses(s, rng);
    s.validate();
    return s;
}

Strategy random_fis_strategy(StrategyKind kind, int m, int q, Rng& rng) {
    Strategy s;
    s.kind = kind;
    s.name = "random-fis";
    s.m = m;
    s.q = q;
    if (kind == StrategyKind::routing) {
        if (q < m) {
            throw std::invalid_argument("random routing strategies need q >= m");
        }
        s.a_keep = q;
        s.b_keep = q;
    } else {
        split_widths(s, q, rng);
    }
    s.state = StateVector(Strategy::make_layout(m, s.a_keep, s.a_comm, s.b_keep, s.b_comm),
                          random_amplitudes(s.total_qubits(), rng));
    s.response_index = ResponseIndex::by_basis;
    random_responses(s, rng);
    s.validate();
    return s;
}

Amplitudes permute_qubits(const Amplitudes& amps, const std::vector<int>& new_position) {
    const int w = static_cast<int>(new_position.size());
    if (amps.size() != (Eigen::Index{1} << w)) {
        throw std::invalid_argument("permute_qubits: permutation width does not match the state");
    }
    Amplitudes out(amps.size());
    for (Eigen::Index k = 0; k < amps.size(); k++) {
        Eigen::Index j = 0;
        for (int b = 0; b < w; b++) {
            if ((k >> b) & 1) {
                j |= Eigen::Index{1} << new_position[b];
            }
        }
        out[j] = amps[k];
    }
    return out;
}

Matrix permute_operator_qubits(const Matrix& op, const std::vector<int>& new_position) {
    const int w = static_cast<int>(new_position.size());
    if (op.rows() != (Eigen::Index{1} << w) || op.cols() != op.rows()) {
        throw std::invalid_argument("permute_operator_qubits: permutation width does not match the operator");
    }
    std::vector<Eigen::Index> map(static_cast<std::size_t>(op.rows()));
    for (Eigen::Index k = 0; k < op.rows(); k++) {
        Eigen::Index j = 0;
        for (int b = 0; b < w; b++) {
            if ((k >> b) & 1) {
                j |= Eigen::Index{1} << new_position[b];
            }
        }
        map[static_cast<std::size_t>(k)] = j;
    }
    Matrix out(op.rows(), op.cols());
    for (Eigen::Index r = 0; r < op.rows(); r++) {
        for (Eigen::Index c = 0; c < op.cols(); c++) {
            out(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]) = op(r, c);
        }
    }
    return out;
}

Matrix kron_low_high(const Matrix& low, const Matrix& high) {
    Matrix out(low.rows() * high.rows(), low.cols() * high.cols());
    for (Eigen::Index i = 0; i < high.rows(); i++) {
        for (Eigen::Index j = 0; j < high.cols(); j++) {
            out.block(i * low.rows(), j * low.cols(), low.rows(), low.cols()) = high(i, j) * low;
        }
    }
    return out;
}

namespace {

// Position of each qubit of the round-interleaved product in the m-round
// layout. Interleaved order: round 0's (V, Ak, Ac, Bk, Bc), then round 1's, ...
std::vector<int> interleaved_to_grouped(const Strategy& c, int m) {
    const int widths[5] = {1, c.a_keep, c.a_comm, c.b_keep, c.b_comm};
    int group_start[5];
    int acc = 0;
    for (int g = 0; g < 5; g++) {
        group_start[g] = acc;
        acc += widths[g] * m;
    }
    std::vector<int> pos;
    for (int r = 0; r < m; r++) {
        for (int g = 0; g < 5; g++) {
            for (int k = 0; k < widths[g]; k++) {
                pos.push_back(group_start[g] + r * widths[g] + k);
            }
        }
    }
    return pos;
}

// Same for a primed register made of two groups (first, second).
std::vector<int> primed_to_grouped(int first, int second, int m) {
    std::vector<int> pos;
    for (int r = 0; r < m; r++) {
        for (int k = 0; k < first; k++) {
            pos.push_back(r * first + k);
        }
        for (int k = 0; k < second; k++) {
            pos.push_back(first * m + r * second + k);
        }
    }
    return pos;
}

std::vector<Matrix> tensor_family(const std::vector<std::vector<Matrix>>& fams, std::size_t slot_of_round_bit0,
                                  std::size_t slot_of_round_bit1, std::uint64_t zlex, int m,
                                  const std::vector<int>& regroup) {
    std::vector<Matrix> out;
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << m); a++) {
        Matrix acc = Matrix::Ones(1, 1);
        for (int r = 0; r < m; r++) {
            int zr = static_cast<int>((zlex >> (m - 1 - r)) & 1);
            int ar = static_cast<int>((a >> (m - 1 - r)) & 1);
            const auto& fam = fams[zr ? slot_of_round_bit1 : slot_of_round_bit0];
            acc = kron_low_high(acc, fam[ar]);
        }
        out.push_back(permute_operator_qubits(acc, regroup));
    }
    return out;
}

}  // namespace

Strategy tensor_rounds(const Strategy& c, int m) {
    c.validate();
    if (c.m != 1) {
        throw std::invalid_argument("tensor_rounds: component must be a one-round strategy");
    }
    if (!c.depends_only_on_z()) {
        throw std::invalid_argument("tensor_rounds: component must be FIS with constant or by_basis responses");
    }
    if (m < 1) {
        throw std::invalid_argument("tensor_rounds: m must be at least 1");
    }
    Strategy s;
    s.kind = c.kind;
    s.name = c.name;
    s.n = 0;
    s.m = m;
    s.q = c.q * m;
    s.a_keep = c.a_keep * m;
    s.a_comm = c.a_comm * m;
    s.b_keep = c.b_keep * m;
    s.b_comm = c.b_comm * m;
    if (s.total_qubits() > kMaxQubits) {
        throw std::invalid_argument("tensor_rounds: " + std::to_string(s.total_qubits()) + " qubits exceed " +
                                    std::to_string(kMaxQubits));
    }
    Amplitudes amps = Amplitudes::Ones(1);
    for (int r = 0; r < m; r++) {
        amps = tensor(StateVector(amps), StateVector(c.state.amplitudes())).amplitudes();
    }
    s.state = StateVector(Strategy::make_layout(m, s.a_keep, s.a_comm, s.b_keep, s.b_comm),
                          permute_qubits(amps, interleaved_to_grouped(c, m)));

    const bool by_basis = c.response_index == ResponseIndex::by_basis;
    s.response_index = by_basis ? ResponseIndex::by_basis : ResponseIndex::constant;
    const std::size_t slot0 = 0;
    const std::size_t slot1 = by_basis ? 1 : 0;
    const std::uint64_t slots = by_basis ? (std::uint64_t{1} << m) : 1;
    const auto a_regroup = primed_to_grouped(c.a_keep, c.b_comm, m);
    const auto b_regroup = primed_to_grouped(c.b_keep, c.a_comm, m);
    if (c.kind == StrategyKind::bb84) {
        for (std::uint64_t z = 0; z < slots; z++) {
            s.alice_povms.push_back(tensor_family(c.alice_povms, slot0, slot1, z, m, a_regroup));
            s.bob_povms.push_back(tensor_family(c.bob_povms, slot0, slot1, z, m, b_regroup));
        }
    } else {
        for (std::uint64_t z = 0; z < slots; z++) {
            Matrix ka = Matrix::Ones(1, 1);
            Matrix lb = Matrix::Ones(1, 1);
            for (int r = 0; r < m; r++) {
                int zr = static_cast<int>((z >> (m - 1 - r)) & 1);
                ka = kron_low_high(ka, c.alice_routing[zr ? slot1 : slot0]);
                lb = kron_low_high(lb, c.bob_routing[zr ? slot1 : slot0]);
            }
            s.alice_routing.push_back(permute_operator_qubits(ka, a_regroup));
            s.bob_routing.push_back(permute_operator_qubits(lb, b_regroup));
        }
        const int ap = c.a_prime_width();
        const int bp = c.b_prime_width();
        for (int r = 0; r < m; r++) {
            s.alice_outputs.push_back(a_regroup[static_cast<std::size_t>(r * ap + c.alice_outputs[0])]);
            s.bob_outputs.push_back(b_regroup[static_cast<std::size_t>(r * bp + c.bob_outputs[0])]);
        }
    }
    s.validate();
    return s;
}

namespace {

// New lex string whose bit i is old bit perm[i].
std::uint64_t permute_lex(std::uint64_t old_lex, const std::vector<int>& perm) {
    const int m = static_cast<int>(perm.size());
    std::uint64_t out = 0;
    for (int i = 0; i < m; i++) {
        std::uint64_t bit = (old_lex >> (m - 1 - perm[i])) & 1;
        out |= bit << (m - 1 - i);
    }
    return out;
}

template <typename T>
std::vector<T> permute_slots(const std::vector<T>& by_z, const std::vector<int>& perm) {
    std::vector<T> out(by_z.size());
    for (std::uint64_t z = 0; z < by_z.size(); z++) {
        out[permute_lex(z, perm)] = by_z[z];
    }
    return out;
}

}  // namespace

Strategy permute_rounds(const Strategy& s, const std::vector<int>& perm) {
    s.validate();
    if (perm.size() != static_cast<std::size_t>(s.m)) {
        throw std::invalid_argument("permute_rounds: permutation must have m entries");
    }
    std::vector<int> check = perm;
    std::sort(check.begin(), check.end());
    for (int i = 0; i < s.m; i++) {
        if (check[i] != i) {
            throw std::invalid_argument("permute_rounds: not a permutation");
        }
    }
    Strategy out = s;
    // Old V qubit perm[i] moves to position i.
    std::vector<int> new_position(static_cast<std::size_t>(s.total_qubits()));
    for (int k = 0; k < s.total_qubits(); k++) {
        new_position[k] = k;
    }
    for (int i = 0; i < s.m; i++) {
        new_position[perm[i]] = i;
    }
    out.state = StateVector(s.state.layout(), permute_qubits(s.state.amplitudes(), new_position));
    if (s.kind == StrategyKind::bb84) {
        for (auto* fams : {&out.alice_povms, &out.bob_povms}) {
            for (auto& fam : *fams) {
                fam = permute_slots(fam, perm);
            }
            if (s.response_index == ResponseIndex::by_basis) {
                *fams = permute_slots(*fams, perm);
            }
        }
    } else {
        if (s.response_index == ResponseIndex::by_basis) {
            out.alice_routing = permute_slots(s.alice_routing, perm);
            out.bob_routing = permute_slots(s.bob_routing, perm);
        }
        for (int i = 0; i < s.m; i++) {
            out.alice_outputs[i] = s.alice_outputs[perm[i]];
            out.bob_outputs[i] = s.bob_outputs[perm[i]];
        }
    }
    out.validate();
    return out;
}

}  // namespace qpv
