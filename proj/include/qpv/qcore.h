#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qpv/bitstring.h"
#include "qpv/rng.h"

namespace qpv {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Amplitudes = Eigen::VectorXcd;

/// Dense evaluation is O(4^width); registers beyond this are rejected.
inline constexpr int kMaxQubits = 14;

inline constexpr double kStructuralTolerance = 1e-9;

struct Register {
    std::string name;
    int offset = 0;
    int width = 0;
};

/// Named qubit ranges. Registers are concatenated in declaration order and
/// amplitudes are little-endian: qubit k is bit k of the basis index.
class Layout {
public:
    Layout() = default;
    explicit Layout(const std::vector<std::pair<std::string, int>>& widths);

    /// One register named "q" covering `width` qubits.
    static Layout flat(int width);

    int num_qubits() const { return total_; }
    const std::vector<Register>& registers() const { return registers_; }
    bool has(const std::string& name) const;
    const Register& at(const std::string& name) const;

    /// Global qubit indices of a register, low to high.
    std::vector<int> qubits(const std::string& name) const;

    /// Concatenation: this layout's qubits first. Names must stay unique.
    Layout concat(const Layout& high) const;

private:
    std::vector<Register> registers_;
    int total_ = 0;
};

/// Normalized pure state. Immutable; every operation returns a new value.
class StateVector {
public:
    StateVector(Layout layout, Amplitudes amplitudes);
    explicit StateVector(Amplitudes amplitudes);

    static StateVector basis(Layout layout, std::uint64_t index);

    const Layout& layout() const { return layout_; }
    const Amplitudes& amplitudes() const { return amplitudes_; }
    int num_qubits() const { return layout_.num_qubits(); }
    Complex operator[](std::size_t i) const { return amplitudes_[static_cast<Eigen::Index>(i)]; }

private:
    Layout layout_;
    Amplitudes amplitudes_;
};

/// |low> (x) |high>, with `low` occupying the low qubit indices. Register
/// names are kept unless they collide, in which case the result is flat.
StateVector tensor(const StateVector& low, const StateVector& high);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

enum class OperatorKind { unitary, effect, projector };

/// Dense square operator on `width` qubits, validated against its kind.
class OperatorMatrix {
public:
    OperatorMatrix(Matrix entries, OperatorKind kind);

    const Matrix& matrix() const { return entries_; }
    OperatorKind kind() const { return kind_; }
    int width() const { return width_; }

private:
    Matrix entries_;
    OperatorKind kind_;
    int width_;
};

bool is_unitary(const Matrix& m, double tol = kStructuralTolerance);
bool is_effect(const Matrix& m, double tol = kStructuralTolerance);
bool is_projector(const Matrix& m, double tol = kStructuralTolerance);

/// True iff the family sums to the identity within `tol` entrywise and every
/// member is an effect.
bool is_povm(std::span<const Matrix> family, double tol = 1e-8);

/// Number of qubits of a 2^k x 2^k matrix; throws otherwise.
int qubit_width(const Matrix& m);

namespace gates {
Matrix identity(int width);
Matrix hadamard();
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
/// Control is the operator's qubit 0, target its qubit 1.
Matrix cnot();
/// CNOT followed by H on the control: maps Phi+, Phi-, Psi+, Psi- to
/// |00>, |10>, |01>, |11> (bits listed as control, target).
Matrix bell_rotation();
/// X^x Z^z for a single qubit.
Matrix pauli(int x, int z);
}  // namespace gates

/// |psi><psi| as a projector on the state's full width.
OperatorMatrix projector_onto(const StateVector& state);

/// In-place action of `op` on the target qubits of a raw amplitude vector.
/// Operator qubit k acts on global qubit targets[k].
void apply_matrix(Amplitudes& amps, const Matrix& op, std::span<const int> targets);

/// Re <psi| op_targets |psi> for a raw (possibly unnormalized) vector.
double expectation(const Amplitudes& amps, const Matrix& op, std::span<const int> targets);

/// Applies a unitary-kind operator. Throws for other kinds or bad targets.
StateVector apply_operator(const StateVector& state, const OperatorMatrix& op, std::span<const int> targets);

/// Born probability of an effect on the target qubits, clamped to [0, 1].
double project_probability(const StateVector& state, const OperatorMatrix& effect, std::span<const int> targets);

struct Measurement {
    int outcome;
    StateVector state;
};

/// Measures one qubit in the computational (basis 0) or Hadamard (basis 1)
/// basis. The collapsed state holds H^basis |outcome> on that qubit.
Measurement measure_basis(const StateVector& state, int qubit, int basis, Rng& rng);

struct BellMeasurement {
    /// The teleported qubit equals X^x_correction Z^z_correction |input>.
    int x_correction;
    int z_correction;
    StateVector state;
};

/// Projects (first, second) onto one of the four Bell states.
BellMeasurement bell_measure(const StateVector& state, int first, int second, Rng& rng);

/// (x)_i H^{z_i}|a_i> with a_i on qubit i.
StateVector bb84_encode(const BitString& a, const BitString& z);

/// (|00> + |11>)/sqrt(2).
StateVector epr_pair();

/// cos(pi/8)|0> + sin(pi/8)|1>.
StateVector breidbart_state();

}  // namespace qpv
