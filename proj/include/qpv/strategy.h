#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qpv/qcore.h"
#include "qpv/rng.h"

namespace qpv {

enum class StrategyKind { bb84, routing };

std::string to_string(StrategyKind k);

/// What the response operators are allowed to depend on.
///  constant: one family for all inputs.
///  by_basis: indexed by z = f(x, y), lex order.
///  by_pair: indexed by x * 2^n + y.
enum class ResponseIndex { constant, by_basis, by_pair };

/// Two-attacker strategy in purified form.
///
/// The state lives on registers V (m), Ak, Ac, Bk, Bc, in that order.
/// Alice's first-stage unitary U^x acts on A = Ak Ac and Bob's V^y on
/// B = Bk Bc. After the exchange Alice holds A' = Ak Bc and Bob holds
/// B' = Bk Ac.
///
/// BB84 kind: POVMs {A_a} on A' and {B_a} on B', one per response slot,
/// elements indexed by the answer string's lex index.
/// Routing kind: unitaries K on A' and L on B' per slot; round i returns
/// A'[alice_outputs[i]] to V0 or B'[bob_outputs[i]] to V1.
struct Strategy {
    StrategyKind kind = StrategyKind::bb84;
    std::string name;
    /// Input length the unitaries / by_pair responses are indexed by; 0 if unused.
    int n = 0;
    int m = 1;
    /// Declared pre-shared qubits per attacker. Intercepted qubits and
    /// locally created ancillas are not counted.
    int q = 0;
    int a_keep = 0;
    int a_comm = 0;
    int b_keep = 0;
    int b_comm = 0;
    StateVector state = StateVector(Amplitudes::Ones(1));
    /// Empty (identity, the FIS case) or 2^n entries on A.
    std::vector<Matrix> alice_unitaries;
    /// Empty or 2^n entries on B.
    std::vector<Matrix> bob_unitaries;
    ResponseIndex response_index = ResponseIndex::constant;
    std::vector<std::vector<Matrix>> alice_povms;
    std::vector<std::vector<Matrix>> bob_povms;
    std::vector<Matrix> alice_routing;
    std::vector<Matrix> bob_routing;
    std::vector<int> alice_outputs;
    std::vector<int> bob_outputs;

    static Layout make_layout(int m, int a_keep, int a_comm, int b_keep, int b_comm);

    int a_width() const { return a_keep + a_comm; }
    int b_width() const { return b_keep + b_comm; }
    int a_prime_width() const { return a_keep + b_comm; }
    int b_prime_width() const { return b_keep + a_comm; }
    int total_qubits() const { return m + a_width() + b_width(); }

    std::vector<int> v_qubits() const;
    std::vector<int> a_qubits() const;
    std::vector<int> b_qubits() const;
    /// Global indices of A' = Ak then Bc.
    std::vector<int> a_prime_qubits() const;
    /// Global indices of B' = Bk then Ac.
    std::vector<int> b_prime_qubits() const;

    bool is_fis() const { return alice_unitaries.empty() && bob_unitaries.empty(); }
    /// True iff success depends on (x, y) only through z.
    bool depends_only_on_z() const { return is_fis() && response_index != ResponseIndex::by_pair; }

    std::size_t response_slots() const;
    std::size_t response_slot(std::uint64_t x, std::uint64_t y, std::uint64_t z) const;

    /// Throws std::invalid_argument on any shape, width or POVM violation.
    void validate() const;
};

// Random constructions used by tests and the stability experiment.

/// Haar-distributed unitary on `width` qubits (QR of a Ginibre matrix).
Matrix random_unitary(int width, Rng& rng);

/// Random POVM with `outcomes` elements on `width` qubits.
std::vector<Matrix> random_povm(int width, int outcomes, Rng& rng);

/// Normalized complex Gaussian vector.
Amplitudes random_amplitudes(int num_qubits, Rng& rng);

/// Random general strategy with q qubits per attacker (split randomly into
/// keep / comm), unitaries indexed by n-bit inputs and by_pair responses.
/// Routing needs q >= m so every round has an output qubit.
Strategy random_strategy(StrategyKind kind, int n, int m, int q, Rng& rng);

/// Random FIS strategy: no first-stage unitaries, by_basis responses.
Strategy random_fis_strategy(StrategyKind kind, int m, int q, Rng& rng);

/// m independent copies of a one-round, input-independent strategy, with
/// registers regrouped into the m-round layout.
Strategy tensor_rounds(const Strategy& component, int m);

/// Round i of the result is round perm[i] of `s`. Pair with
/// FunctionTable::permute_outputs(perm) to keep the success unchanged.
Strategy permute_rounds(const Strategy& s, const std::vector<int>& perm);

/// Reorders qubits: qubit k of the input becomes qubit new_position[k].
Amplitudes permute_qubits(const Amplitudes& amps, const std::vector<int>& new_position);
Matrix permute_operator_qubits(const Matrix& op, const std::vector<int>& new_position);

/// Kronecker product with `low` on the low qubit indices.
Matrix kron_low_high(const Matrix& low, const Matrix& high);

}  // namespace qpv
