import importlib.util
from pathlib import Path

import numpy as np

from amelab import kernels

BENCH = Path(__file__).resolve().parents[1] / "benchmarks" / "bench_kernels.py"


def _load():
    spec = importlib.util.spec_from_file_location("bench_kernels", BENCH)
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_benchmark_runs_on_every_backend(capsys):
    rows = _load().main(["--quick", "--repeat", "1"])
    assert len(rows) == 3
    for _, times in rows:
        assert set(times) == set(kernels.available_backends())
        assert all(t > 0 for t in times.values())
    assert "speedup" in capsys.readouterr().out


def test_benchmark_workloads_agree_across_backends():
    bench = _load()
    backends = [kernels.load_backend(b) for b in kernels.available_backends()]
    for fn in bench.workloads(quick=True).values():
        outs = [fn(m) for m in backends]
        for o in outs[1:]:
            if isinstance(o, (complex, np.ndarray)):
                assert np.allclose(o, outs[0], atol=1e-12)
            else:
                assert np.array_equal(np.asarray(o), np.asarray(outs[0]))
