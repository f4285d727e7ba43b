"""Smoke test for the qsd extension module."""

import math

import qsd


def main():
    h = qsd.QubitOperator.heisenberg(2, 0.3)
    s = qsd.Subspace(["01", "10"])
    energy, vec, residual, iterations, converged = qsd.solve(h, s)
    assert converged and abs(energy + 1.6) < 1e-10, energy
    assert abs(sum(abs(v) ** 2 for v in vec) - 1.0) < 1e-12

    indptr, indices, data = qsd.build_csr(h, s)
    assert indptr == [0, 2, 4] and indices == [0, 1, 0, 1]
    assert data == [-1.0, 0.6, 0.6, -1.0]

    h8 = qsd.QubitOperator.heisenberg(8, 0.3)
    full = qsd.Subspace.full(8)
    e_csr = qsd.solve(h8, full)[0]
    e_mf = qsd.solve(h8, full, matrix_free=True)[0]
    assert abs(e_csr - e_mf) < 1e-9

    text = "qubits 2\n0.3 X0 X1\n0.3 Y0 Y1\n1.0 Z0 Z1\n0.5 Z0\n"
    op = qsd.QubitOperator.from_text(text)
    pruned = qsd.ramps(op, qsd.Subspace(["01"]), 1e-6)
    assert pruned.strings() == ["01", "10"]
    assert qsd.solve(op, pruned)[0] < -1.78

    fcidump = (
        "&FCI NORB=2,NELEC=2,MS2=0,\n&END\n"
        "0.6757101548035161 1 1 1 1\n0.6645817302552968 1 1 2 2\n"
        "0.18093119978423136 2 1 2 1\n0.6985737227320183 2 2 2 2\n"
        "-1.2563390730032498 1 1 0 0\n-0.4718960072811406 2 2 0 0\n"
        "0.7199689944489797 0 0 0 0\n"
    )
    h2 = qsd.QubitOperator.from_fcidump(fcidump)
    two_electron = qsd.Subspace([b for b in qsd.Subspace.full(4).strings() if b.count("1") == 2])
    e_h2 = qsd.solve(h2, two_electron, fermionic=True)[0]
    assert math.isclose(e_h2, -1.1373, abs_tol=1e-3), e_h2

    neel = qsd.Subspace.neel(4)
    assert "0101" in neel.strings() and len(neel) == 5

    try:
        qsd.QubitOperator.from_text("qubits 1\n1.0 Q0\n")
    except ValueError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("parse error not raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
