import os
import subprocess
import sys

import numpy as np
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from dehnfloer import _core, _kernels_py


def _backend_with(env_value):
    env = dict(os.environ)
    env.pop("DEHNFLOER_PURE_PYTHON", None)
    if env_value:
        env["DEHNFLOER_PURE_PYTHON"] = env_value
    code = "from dehnfloer import _core; print(_core.BACKEND)"
    return subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True).stdout.strip()


def test_env_var_selects_fallback():
    assert _backend_with("1") == "python"
    assert _backend_with(None) in ("compiled", "python")


@given(arrays(np.uint8, st.tuples(st.integers(0, 12), st.integers(0, 80)), elements=st.integers(0, 1)))
def test_rank_backends_agree(bits):
    assert _kernels_py.f2_rank(bits) == (_core.f2_rank(bits) if bits.size else 0)
