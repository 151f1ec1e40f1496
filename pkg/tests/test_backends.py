import subprocess
import sys
import textwrap

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fkinetic import _backend, _kernels_py

needs_ext = pytest.mark.skipif(not _backend.compiled_available(), reason="extension not built")


def test_use_rejects_unknown():
    with pytest.raises(ValueError):
        _backend.use("fortran")


def test_fallback_selected_when_extension_missing():
    code = textwrap.dedent(
        """
        import sys
        class Block:
            def find_spec(self, name, path=None, target=None):
                if name == "fkinetic._kernels":
                    raise ImportError("blocked")
        sys.meta_path.insert(0, Block())
        import fkinetic
        from fkinetic import _backend
        assert fkinetic.backend() == "python", fkinetic.backend()
        assert not _backend.compiled_available()
        try:
            _backend.use("compiled")
        except ImportError:
            pass
        else:
            raise SystemExit("expected ImportError")
        sol = fkinetic.build_solution(fkinetic.KineticProblem("T1", 3.0, 1.0, 2.0,
                                      fkinetic.make_poly(0, 1, [1])))
        print(repr(sol(1.0)))
        """
    )
    proc = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert float(proc.stdout) == pytest.approx(3 * np.exp(-2), rel=1e-14)


@needs_ext
@settings(max_examples=200, deadline=None)
@given(
    st.sampled_from([0.1, 0.3, 0.5, 0.9, 1.3, 2.0]),
    st.floats(-1.5, 4.0),
    st.floats(-1.0, 1.0),
)
def test_ml_series_parity(alpha, beta, z):
    from fkinetic import _kernels

    args = (alpha, beta, z, 1e-12, 1e-300, 10_000)
    a = _kernels_py.ml_series(*args)
    b = _kernels.ml_series(*args)
    assert a[2] == b[2]
    assert b[0] == pytest.approx(a[0], rel=1e-13, abs=1e-15)


@needs_ext
@pytest.mark.parametrize("x", [-170.5, -3.5, -2.0, 0.0, 0.2, 1.0, 5.5, 170.5, 171.2, 500.0])
def test_recip_gamma_parity(x):
    from fkinetic import _kernels

    assert _kernels.recip_gamma(x) == pytest.approx(_kernels_py.recip_gamma(x), rel=1e-13)


@needs_ext
@pytest.mark.parametrize("alpha", [0.2, 0.8, 1.0, 1.6])
def test_history_sums_bit_identical(alpha):
    from fkinetic import _kernels
    from fkinetic.frac_ops import trapezoid_weights

    rng = np.random.default_rng(7)
    f = rng.standard_normal(700)
    interior, endpoint, _ = trapezoid_weights(alpha, f.shape[0])
    assert np.array_equal(
        _kernels_py.history_sums(f, interior, endpoint),
        _kernels.history_sums(f, interior, endpoint),
    )
