"""Circuit execution, sensitivity vectors, and Jacobian machinery."""
import numpy as np
import pytest

from driftcal.circuits import (
    BUILTIN_CIRCUITS,
    Circuit,
    GateOp,
    NoiseParams,
    build_jacobian,
    circuit_from_names,
    cz_family,
    exact_distribution,
    gx_family,
    gx_power,
    gxgy_family,
    pseudoinverse_estimate,
    run_circuit,
    sensitivity_vector,
)
from driftcal.gates import ControlParameterSet
from driftcal.rng import RngStream

# Published reference matrices, reproduced to 3 decimals by the finite
# difference machinery (see test_acceptance for the exact comparison and
# the outcome-labeling notes).
GXGY_RAW = np.array([[0.5, -1.0], [-0.5, 1.0], [-1.5, 1.0], [1.5, -1.0]])
CZ_RAW_X4 = np.array([
    [0, -1, 1], [0, 1, -1], [0, -1, -1], [0, 1, 1],
    [-1, 0, 1], [-1, 0, -1], [1, 0, -1], [1, 0, 1],
])


# =============================================================================
# execution
# =============================================================================

def test_single_gx_uniform_outcomes():
    fam = gx_family(1)
    params = ControlParameterSet.offsets(0.0)
    gen = RngStream(1, 0).generator()
    shots = 50_000
    ones = sum(
        int(run_circuit(fam.circuits[0], fam, params, NoiseParams(), gen))
        for _ in range(shots)
    )
    assert abs(ones / shots - 0.5) < 3 * np.sqrt(0.25 / shots)


def test_gx_power_six_is_deterministic():
    fam = gx_family(6)
    params = ControlParameterSet.offsets(0.0)
    gen = RngStream(1, 1).generator()
    for _ in range(50):
        assert run_circuit(fam.circuits[0], fam, params, NoiseParams(), gen) == "1"


def test_cz_probe_uniform_over_four_outcomes():
    fam = cz_family(1)
    params = ControlParameterSet.offsets([0.0, 0.0, 0.0])
    probs = exact_distribution(fam.circuits[0], fam, params.deltas)
    assert np.allclose(probs, 0.25, atol=1e-12)
    gen = RngStream(1, 2).generator()
    shots = 20_000
    counts = np.zeros(4)
    for _ in range(shots):
        counts[int(run_circuit(fam.circuits[0], fam, params, NoiseParams(), gen), 2)] += 1
    se = np.sqrt(0.25 * 0.75 / shots)
    assert np.all(np.abs(counts / shots - 0.25) < 3.5 * se)


def test_run_circuit_rejects_mismatched_params():
    fam = cz_family(1)
    gen = RngStream(1, 3).generator()
    with pytest.raises(ValueError):
        run_circuit(fam.circuits[0], fam, ControlParameterSet.offsets(0.0), NoiseParams(), gen)


def test_noise_placement_options_run():
    fam = gx_family(5)
    params = ControlParameterSet.offsets(0.1)
    for placement in ("before", "after"):
        gen = RngStream(2, 0).generator()
        noise = NoiseParams(p=0.01, p_spam=0.02, placement=placement)
        out = run_circuit(fam.circuits[0], fam, params, noise, gen)
        assert out in ("0", "1")
    with pytest.raises(ValueError):
        NoiseParams(placement="during")


def test_circuit_validation():
    with pytest.raises(ValueError):
        Circuit((GateOp("gx", (0,)),), n_qubits=1, reps=0)
    with pytest.raises(ValueError):
        Circuit((GateOp("gx", (1,)),), n_qubits=1)
    assert gx_power(5).with_reps(9).reps == 9


def test_builtin_circuit_names():
    assert set(BUILTIN_CIRCUITS) == {"gx_power", "gxgy_c1", "gxgy_c2", "cz_c1", "cz_c2"}
    c = circuit_from_names([["gx", [0]], "gx"], n_qubits=1, reps=2)
    assert len(c.ops) == 2 and c.reps == 2


# =============================================================================
# sensitivities
# =============================================================================

def test_single_parameter_sensitivity_closed_form():
    """s_z = -z * alpha * r / 2; outcome "0" (z=+1) at r=1 gives -0.5."""
    fam = gx_family(1)
    sv = sensitivity_vector(fam.circuits[0], fam, "0")
    assert sv.values[0] == pytest.approx(-0.5, abs=1e-6)
    for reps in (5, 13):
        fam_r = gx_family(reps)
        sv = sensitivity_vector(fam_r.circuits[0], fam_r, "0")
        assert sv.values[0] == pytest.approx(-reps / 2, rel=1e-6)


def test_gxgy_jacobian_values():
    fam = gxgy_family(1)
    jac = build_jacobian(fam.circuits, fam)
    assert np.allclose(jac.matrix, GXGY_RAW, atol=5e-6)
    assert jac.rank == 2
    assert jac.informationally_complete


def test_cz_jacobian_values():
    fam = cz_family(1)
    jac = build_jacobian(fam.circuits, fam)
    assert np.allclose(4 * jac.matrix, CZ_RAW_X4, atol=2e-5)
    assert jac.rank == 3
    assert jac.condition_number == pytest.approx(np.sqrt(2), rel=1e-6)


def test_jacobian_columns_sum_to_zero_per_circuit():
    for fam in (gxgy_family(1), cz_family(1), gx_family(5)):
        jac = build_jacobian(fam.circuits, fam)
        start = 0
        for circuit in fam.circuits:
            dim = 2**circuit.n_qubits
            block = jac.matrix[start:start + dim]
            assert np.all(np.abs(block.sum(axis=0)) < 1e-8)
            start += dim


def test_duplicated_circuit_does_not_change_rank():
    fam = gxgy_family(1)
    jac = build_jacobian(fam.circuits + fam.circuits, fam)
    assert jac.rank == 2


def test_rank_deficiency_flagged():
    fam = gxgy_family(1)
    solo = build_jacobian(fam.circuits[:1], fam)
    assert solo.rank == 1
    assert not solo.informationally_complete
    with pytest.raises(ValueError):
        pseudoinverse_estimate(solo, np.array([0.5, 0.5]))


# =============================================================================
# pseudoinverse diagnostics
# =============================================================================

def _stacked_probs(fam, deltas):
    return np.concatenate([exact_distribution(c, fam, np.asarray(deltas)) for c in fam.circuits])


def test_pseudoinverse_recovers_small_offsets():
    fam = gxgy_family(1)
    jac = build_jacobian(fam.circuits, fam)
    for deltas in ([0.01, -0.02], [0.002, 0.001]):
        est = pseudoinverse_estimate(jac, _stacked_probs(fam, deltas))
        err = np.abs(est - np.asarray(deltas)).max()
        assert err < 3.0 * float(np.max(np.abs(deltas))) ** 2


def test_pseudoinverse_zero_at_optimum():
    fam = cz_family(1)
    jac = build_jacobian(fam.circuits, fam)
    est = pseudoinverse_estimate(jac, _stacked_probs(fam, [0.0, 0.0, 0.0]))
    assert np.all(np.abs(est) < 1e-8)


def test_pseudoinverse_one_hot_regression():
    fam = gxgy_family(1)
    jac = build_jacobian(fam.circuits, fam)
    onehot = np.zeros(4)
    onehot[0] = 1.0
    assert np.allclose(pseudoinverse_estimate(jac, onehot), [-0.5, -0.75], atol=1e-5)


def test_pseudoinverse_length_check():
    fam = gxgy_family(1)
    jac = build_jacobian(fam.circuits, fam)
    with pytest.raises(ValueError):
        pseudoinverse_estimate(jac, np.zeros(3))
