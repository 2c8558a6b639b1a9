#include "qpv/qcore.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qpv {

namespace {

void check_targets(int num_qubits, std::span<const int> targets, int width) {
    if (static_cast<int>(targets.size()) != width) {
        throw std::invalid_argument(
            "operator width " + std::to_string(width) + " does not match " + std::to_string(targets.size()) +
            " target qubits");
    }
    std::uint64_t seen = 0;
    for (int t : targets) {
        if (t < 0 || t >= num_qubits) {
            throw std::invalid_argument("target qubit " + std::to_string(t) + " outside register");
        }
        if ((seen >> t) & 1) {
            throw std::invalid_argument("duplicate target qubit " + std::to_string(t));
        }
        seen |= std::uint64_t{1} << t;
    }
}

int log2_exact(Eigen::Index size) {
    if (size <= 0 || (size & (size - 1)) != 0) {
        throw std::invalid_argument("dimension " + std::to_string(size) + " is not a power of two");
    }
    int k = 0;
    while ((Eigen::Index{1} << k) < size) {
        k++;
    }
    return k;
}

// Offsets of the 2^k sub-basis states spanned by `targets`.
std::vector<std::size_t> target_offsets(std::span<const int> targets) {
    std::size_t dim = std::size_t{1} << targets.size();
    std::vector<std::size_t> offsets(dim, 0);
    for (std::size_t j = 0; j < dim; j++) {
        for (std::size_t l = 0; l < targets.size(); l++) {
            if ((j >> l) & 1) {
                offsets[j] |= std::size_t{1} << targets[l];
            }
        }
    }
    return offsets;
}

std::size_t target_mask(std::span<const int> targets) {
    std::size_t mask = 0;
    for (int t : targets) {
        mask |= std::size_t{1} << t;
    }
    return mask;
}

}  // namespace

Layout::Layout(const std::vector<std::pair<std::string, int>>& widths) {
    for (const auto& [name, width] : widths) {
        if (width < 0) {
            throw std::invalid_argument("register '" + name + "' has negative width");
        }
        if (has(name)) {
            throw std::invalid_argument("duplicate register name '" + name + "'");
        }
        registers_.push_back(Register{name, total_, width});
        total_ += width;
    }
    if (total_ > kMaxQubits) {
        throw std::invalid_argument(
            "layout has " + std::to_string(total_) + " qubits, limit is " + std::to_string(kMaxQubits));
    }
}

Layout Layout::flat(int width) {
    return Layout({{"q", width}});
}

bool Layout::has(const std::string& name) const {
    return std::any_of(registers_.begin(), registers_.end(), [&](const Register& r) { return r.name == name; });
}

const Register& Layout::at(const std::string& name) const {
    for (const auto& r : registers_) {
        if (r.name == name) {
            return r;
        }
    }
    throw std::invalid_argument("no register named '" + name + "'");
}

std::vector<int> Layout::qubits(const std::string& name) const {
    const Register& r = at(name);
    std::vector<int> out(r.width);
    for (int i = 0; i < r.width; i++) {
        out[i] = r.offset + i;
    }
    return out;
}

Layout Layout::concat(const Layout& high) const {
    std::vector<std::pair<std::string, int>> widths;
    for (const auto& r : registers_) {
        widths.emplace_back(r.name, r.width);
    }
    for (const auto& r : high.registers_) {
        widths.emplace_back(r.name, r.width);
    }
    return Layout(widths);
}

StateVector::StateVector(Layout layout, Amplitudes amplitudes)
    : layout_(std::move(layout)), amplitudes_(std::move(amplitudes)) {
    if (amplitudes_.size() != (Eigen::Index{1} << layout_.num_qubits())) {
        throw std::invalid_argument(
            "amplitude count " + std::to_string(amplitudes_.size()) + " does not match layout of " +
            std::to_string(layout_.num_qubits()) + " qubits");
    }
    double norm = amplitudes_.norm();
    if (std::abs(norm - 1.0) > kStructuralTolerance) {
        throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm) + ")");
    }
}

StateVector::StateVector(Amplitudes amplitudes) : amplitudes_(std::move(amplitudes)) {
    layout_ = Layout::flat(log2_exact(amplitudes_.size()));
    if (std::abs(amplitudes_.norm() - 1.0) > kStructuralTolerance) {
        throw std::invalid_argument("state is not normalized (norm " + std::to_string(amplitudes_.norm()) + ")");
    }
}

StateVector StateVector::basis(Layout layout, std::uint64_t index) {
    Eigen::Index dim = Eigen::Index{1} << layout.num_qubits();
    if (index >= static_cast<std::uint64_t>(dim)) {
        throw std::invalid_argument("basis index out of range");
    }
    Amplitudes amps = Amplitudes::Zero(dim);
    amps[static_cast<Eigen::Index>(index)] = 1.0;
    return StateVector(std::move(layout), std::move(amps));
}

StateVector tensor(const StateVector& low, const StateVector& high) {
    bool clash = false;
    for (const auto& r : high.layout().registers()) {
        clash = clash || low.layout().has(r.name);
    }
    Layout layout = clash ? Layout::flat(low.num_qubits() + high.num_qubits()) : low.layout().concat(high.layout());
    const Amplitudes& a = low.amplitudes();
    const Amplitudes& b = high.amplitudes();
    Amplitudes out(a.size() * b.size());
    for (Eigen::Index j = 0; j < b.size(); j++) {
        out.segment(j * a.size(), a.size()) = a * b[j];
    }
    return StateVector(std::move(layout), std::move(out));
}

double fidelity(const StateVector& a, const StateVector& b) {
    if (a.amplitudes().size() != b.amplitudes().size()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

int qubit_width(const Matrix& m) {
    if (m.rows() != m.cols()) {
        throw std::invalid_argument("operator is not square");
    }
    return log2_exact(m.rows());
}

bool is_unitary(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    Matrix d = m.adjoint() * m - Matrix::Identity(m.rows(), m.cols());
    return d.cwiseAbs().maxCoeff() <= tol;
}

bool is_effect(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return ev.minCoeff() >= -tol && ev.maxCoeff() <= 1.0 + tol;
}

bool is_projector(const Matrix& m, double tol) {
    if (m.rows() != m.cols()) {
        return false;
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
        return false;
    }
    return (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

bool is_povm(std::span<const Matrix> family, double tol) {
    if (family.empty()) {
        return false;
    }
    Eigen::Index dim = family[0].rows();
    Matrix sum = Matrix::Zero(dim, dim);
    for (const auto& e : family) {
        if (e.rows() != dim || !is_effect(e, tol)) {
            return false;
        }
        sum += e;
    }
    return (sum - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff() <= tol;
}

OperatorMatrix::OperatorMatrix(Matrix entries, OperatorKind kind)
    : entries_(std::move(entries)), kind_(kind), width_(qubit_width(entries_)) {
    if (width_ > kMaxQubits) {
        throw std::invalid_argument("operator wider than " + std::to_string(kMaxQubits) + " qubits");
    }
    switch (kind_) {
        case OperatorKind::unitary:
            if (!is_unitary(entries_)) {
                throw std::invalid_argument("operator is not unitary");
            }
            break;
        case OperatorKind::effect:
            if (!is_effect(entries_)) {
                throw std::invalid_argument("operator is not an effect (0 <= E <= I)");
            }
            break;
        case OperatorKind::projector:
            if (!is_projector(entries_)) {
                throw std::invalid_argument("operator is not a projector");
            }
            break;
    }
}

namespace gates {

Matrix identity(int width) {
    Eigen::Index dim = Eigen::Index{1} << width;
    return Matrix::Identity(dim, dim);
}

Matrix hadamard() {
    const double s = std::numbers::sqrt2 / 2;
    Matrix m(2, 2);
    m << s, s, s, -s;
    return m;
}

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, Complex(0, -1), Complex(0, 1), 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix cnot() {
    // Index = control + 2 * target.
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(3, 1) = 1;
    m(2, 2) = 1;
    m(1, 3) = 1;
    return m;
}

Matrix bell_rotation() {
    Matrix h_control = Matrix::Zero(4, 4);
    Matrix h = hadamard();
    for (int t = 0; t < 2; t++) {
        h_control.block(2 * t, 2 * t, 2, 2) = h;
    }
    return h_control * cnot();
}

Matrix pauli(int x, int z) {
    Matrix m = identity(1);
    if (x) {
        m = m * pauli_x();
    }
    if (z) {
        m = m * pauli_z();
    }
    return m;
}

}  // namespace gates

OperatorMatrix projector_onto(const StateVector& state) {
    const Amplitudes& v = state.amplitudes();
    return OperatorMatrix(v * v.adjoint(), OperatorKind::projector);
}

void apply_matrix(Amplitudes& amps, const Matrix& op, std::span<const int> targets) {
    const std::size_t dim = static_cast<std::size_t>(amps.size());
    const std::size_t k = std::size_t{1} << targets.size();
    const std::size_t mask = target_mask(targets);
    const auto offsets = target_offsets(targets);
    Amplitudes in(static_cast<Eigen::Index>(k));
    for (std::size_t base = 0; base < dim; base++) {
        if (base & mask) {
            continue;
        }
        for (std::size_t j = 0; j < k; j++) {
            in[static_cast<Eigen::Index>(j)] = amps[static_cast<Eigen::Index>(base | offsets[j])];
        }
        Amplitudes out = op * in;
        for (std::size_t j = 0; j < k; j++) {
            amps[static_cast<Eigen::Index>(base | offsets[j])] = out[static_cast<Eigen::Index>(j)];
        }
    }
}

double expectation(const Amplitudes& amps, const Matrix& op, std::span<const int> targets) {
    const std::size_t dim = static_cast<std::size_t>(amps.size());
    const std::size_t k = std::size_t{1} << targets.size();
    const std::size_t mask = target_mask(targets);
    const auto offsets = target_offsets(targets);
    Amplitudes in(static_cast<Eigen::Index>(k));
    double total = 0;
    for (std::size_t base = 0; base < dim; base++) {
        if (base & mask) {
            continue;
        }
        for (std::size_t j = 0; j < k; j++) {
            in[static_cast<Eigen::Index>(j)] = amps[static_cast<Eigen::Index>(base | offsets[j])];
        }
        total += in.dot(op * in).real();
    }
    return total;
}

StateVector apply_operator(const StateVector& state, const OperatorMatrix& op, std::span<const int> targets) {
    if (op.kind() != OperatorKind::unitary) {
        throw std::invalid_argument("apply_operator requires a unitary operator");
    }
    check_targets(state.num_qubits(), targets, op.width());
    Amplitudes amps = state.amplitudes();
    apply_matrix(amps, op.matrix(), targets);
    return StateVector(state.layout(), std::move(amps));
}

double project_probability(const StateVector& state, const OperatorMatrix& effect, std::span<const int> targets) {
    if (effect.kind() == OperatorKind::unitary) {
        throw std::invalid_argument("project_probability requires an effect or projector");
    }
    check_targets(state.num_qubits(), targets, effect.width());
    double p = expectation(state.amplitudes(), effect.matrix(), targets);
    return std::clamp(p, 0.0, 1.0);
}

namespace {

// Samples the computational-basis value of `qubit` and collapses in place.
int collapse_qubit(Amplitudes& amps, int qubit, Rng& rng) {
    const std::size_t bit = std::size_t{1} << qubit;
    double p0 = 0;
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        if (!(static_cast<std::size_t>(i) & bit)) {
            p0 += std::norm(amps[i]);
        }
    }
    int outcome = rng.uniform() < p0 ? 0 : 1;
    double keep = outcome ? 1.0 - p0 : p0;
    double scale = 1.0 / std::sqrt(keep);
    for (Eigen::Index i = 0; i < amps.size(); i++) {
        int b = (static_cast<std::size_t>(i) & bit) ? 1 : 0;
        amps[i] = b == outcome ? amps[i] * scale : Complex(0);
    }
    return outcome;
}

}  // namespace

Measurement measure_basis(const StateVector& state, int qubit, int basis, Rng& rng) {
    int q[] = {qubit};
    check_targets(state.num_qubits(), q, 1);
    Amplitudes amps = state.amplitudes();
    Matrix h = gates::hadamard();
    if (basis) {
        apply_matrix(amps, h, q);
    }
    int outcome = collapse_qubit(amps, qubit, rng);
    if (basis) {
        apply_matrix(amps, h, q);
    }
    amps.normalize();
    return Measurement{outcome, StateVector(state.layout(), std::move(amps))};
}

BellMeasurement bell_measure(const StateVector& state, int first, int second, Rng& rng) {
    int q[] = {first, second};
    check_targets(state.num_qubits(), q, 2);
    Amplitudes amps = state.amplitudes();
    Matrix rot = gates::bell_rotation();
    apply_matrix(amps, rot, q);
    int m1 = collapse_qubit(amps, first, rng);
    int m2 = collapse_qubit(amps, second, rng);
    apply_matrix(amps, rot.adjoint(), q);
    amps.normalize();
    return BellMeasurement{m2, m1, StateVector(state.layout(), std::move(amps))};
}

StateVector bb84_encode(const BitString& a, const BitString& z) {
    if (a.size() != z.size()) {
        throw std::invalid_argument("bb84_encode: |a| != |z|");
    }
    if (a.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw std::invalid_argument("bb84_encode: more than " + std::to_string(kMaxQubits) + " qubits");
    }
    const int m = static_cast<int>(a.size());
    const double s = std::numbers::sqrt2 / 2;
    Amplitudes amps = Amplitudes::Ones(Eigen::Index{1} << m);
    for (Eigen::Index idx = 0; idx < amps.size(); idx++) {
        Complex v = 1;
        for (int i = 0; i < m; i++) {
            int b = (idx >> i) & 1;
            if (z[i]) {
                v *= (a[i] && b) ? -s : s;
            } else if (b != a[i]) {
                v = 0;
                break;
            }
        }
        amps[idx] = v;
    }
    return StateVector(Layout::flat(m), std::move(amps));
}

StateVector epr_pair() {
    const double s = std::numbers::sqrt2 / 2;
    Amplitudes amps(4);
    amps << s, 0, 0, s;
    return StateVector(std::move(amps));
}

StateVector breidbart_state() {
    Amplitudes amps(2);
    amps << std::cos(std::numbers::pi / 8), std::sin(std::numbers::pi / 8);
    return StateVector(std::move(amps));
}

}  // namespace qpv
