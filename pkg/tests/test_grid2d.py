import numpy as np
import pytest

from smilansky_lab import grid2d
from smilansky_lab.eigs import TridiagonalSym, sturm_smallest
from smilansky_lab.errors import ComputationError, ConfigurationError, RefinementError
from smilansky_lab.model import ChannelSpec, ModelConfig, PotentialProfile, XDomain


@pytest.fixture(scope="module")
def small_grid():
    return grid2d.Grid2D.uniform(-4.0, 4.0, 40, 3.0, 50)


@pytest.fixture(scope="module")
def oscillator(small_grid):
    return grid2d.assemble_h2d(ModelConfig(omega=1.0), small_grid)


class TestAssembly:
    def test_exact_symmetry(self, oscillator):
        a = oscillator.matrix
        assert abs(a - a.T).max() == 0.0

    def test_five_point_pattern(self, oscillator):
        a = oscillator.matrix
        per_row = np.diff(a.indptr)
        assert np.max(per_row) <= 5

    def test_diagonal_lower_bound(self, oscillator, small_grid):
        g = small_grid
        hx = np.diff(g.x_nodes)[0]
        d = oscillator.matrix.diagonal()
        assert np.all(d >= 2.0 / hx**2 + 2.0 / g.h_y**2
                      + oscillator.potential_min - 1e-12)

    def test_separable_oracle(self, oscillator, small_grid):
        g = small_grid
        hx = np.diff(g.x_nodes)[0]
        bx = TridiagonalSym(np.full(g.n_x, 2.0 / hx**2),
                            np.full(g.n_x - 1, -1.0 / hx**2))
        by = TridiagonalSym(np.full(g.n_y, 2.0 / g.h_y**2) + g.y_nodes**2,
                            np.full(g.n_y - 1, -1.0 / g.h_y**2))
        ex = sturm_smallest(bx, 3, tol=1e-13)
        ey = sturm_smallest(by, 3, tol=1e-13)
        sums = sorted(a + b for a in ex for b in ey)[:3]
        got = grid2d.lowest_eigenvalues(oscillator, 3, tol=1e-9)
        assert np.max(np.abs(np.array([v for v, _ in got])
                             - np.array(sums))) < 1e-8

    def test_zero_channel_ground_energy(self):
        # omega in y plus the Dirichlet box term in x, up to O(h^2)
        g = grid2d.Grid2D.uniform(-6.0, 6.0, 160, 6.0, 240)
        ham = grid2d.assemble_h2d(ModelConfig(omega=1.0), g)
        (val, _), = grid2d.lowest_eigenvalues(ham, 1)
        want = 1.0 + (np.pi / 12.0) ** 2
        assert abs(val - want) < 2e-3
        assert val >= 1.0 - 1e-6

    def test_resolution_check_names_channel(self):
        prof = PotentialProfile("cos2", 1.0, 1.0)
        cfg = ModelConfig(omega=1.0, channels=(ChannelSpec(2.0, 1.5, prof),))
        g = grid2d.Grid2D.uniform(-4.0, 4.0, 40, 8.0, 60)
        with pytest.raises(RefinementError, match="1.5"):
            grid2d.assemble_h2d(cfg, g)

    def test_interval_domain_mismatch_rejected(self):
        cfg = ModelConfig(omega=1.0, x_domain=XDomain("interval", 2.0, "dirichlet"))
        g = grid2d.Grid2D.uniform(-4.0, 4.0, 40, 3.0, 40)
        with pytest.raises(ConfigurationError):
            grid2d.assemble_h2d(cfg, g)

    def test_memory_cap(self):
        with pytest.raises(ConfigurationError):
            grid2d.Grid2D.uniform(-4.0, 4.0, 4000, 3.0, 4000)

    def test_coo_export_round_trip(self, oscillator):
        text = oscillator.export_coo()
        rows = np.array([[float(tok) for tok in line.split()]
                         for line in text.strip().split("\n")])
        a = oscillator.matrix.tocoo()
        assert len(rows) == a.nnz
        assert np.allclose(rows[:, 2].sum(), a.data.sum())


class TestGradedMesh:
    def test_spacing_law(self):
        x = grid2d.graded_x_nodes(-6.0, 6.0, (0.0,), 1.0 / 64.0, 0.25)
        d = np.diff(x)
        assert np.min(d) >= 1.0 / 64.0 - 1e-12
        assert np.max(d) <= 0.25 + 1e-12
        mid = 0.5 * (x[:-1] + x[1:])
        assert np.all(d <= np.maximum(1.0 / 64.0, np.abs(mid) / 4.0) * 1.35)

    def test_graded_matches_uniform_on_oscillator(self):
        # graded assembly of a smooth problem agrees with the uniform answer
        cfg = ModelConfig(omega=1.0)
        x = grid2d.graded_x_nodes(-5.0, 5.0, (0.0,), 1.0 / 32.0, 0.1)
        g = grid2d.Grid2D(-5.0, 5.0, x, 4.0, 160)
        (v_graded, _), = grid2d.lowest_eigenvalues(grid2d.assemble_h2d(cfg, g), 1)
        gu = grid2d.Grid2D.uniform(-5.0, 5.0, 220, 4.0, 160)
        (v_uni, _), = grid2d.lowest_eigenvalues(grid2d.assemble_h2d(cfg, gu), 1)
        assert abs(v_graded - v_uni) < 5e-3

    def test_rayleigh_min_matches_solver(self):
        # independent randomized variational oracle: dense Rayleigh-Ritz over
        # 50-step Krylov spaces from 200 random starts
        rng = np.random.default_rng(11)
        cfg = ModelConfig(omega=1.0)
        g = grid2d.Grid2D.uniform(-3.0, 3.0, 18, 2.5, 20)
        ham = grid2d.assemble_h2d(cfg, g)
        (val, _), = grid2d.lowest_eigenvalues(ham, 1, tol=1e-10)
        a = ham.matrix
        best = np.inf
        for _ in range(200):
            v = rng.standard_normal(ham.n)
            basis = [v / np.linalg.norm(v)]
            for _ in range(50):
                w = a @ basis[-1]
                for b in basis:
                    w = w - (b @ w) * b
                nw = np.linalg.norm(w)
                if nw < 1e-12:
                    break
                basis.append(w / nw)
            q = np.column_stack(basis)
            small = q.T @ (a @ q)
            best = min(best, float(np.linalg.eigvalsh(0.5 * (small + small.T))[0]))
        assert abs(best - val) < 1e-8


class TestScan:
    def test_ladder_validation(self):
        with pytest.raises(ConfigurationError):
            grid2d.transition_scan(ModelConfig(omega=1.0), [4.0, 3.0, 8.0])
        with pytest.raises(ConfigurationError):
            grid2d.transition_scan(ModelConfig(omega=1.0), [4.0, 8.0])

    def test_zero_channel_scan_subcritical(self):
        # start the ladder at Y = 3 so the y-truncation error of the
        # oscillator mode is already below the stability tolerance
        pol = grid2d.ScanPolicy(points_per_unit_y=12, x_half_width=4.0)
        scan = grid2d.transition_scan(ModelConfig(omega=1.0),
                                      [3.0, 4.5, 6.0], pol)
        assert scan.verdict == "subcritical"
        assert abs(scan.rows[-1].lambda0 - (1.0 + (np.pi / 8.0) ** 2)) < 0.02
        vals = [r.lambda0 for r in scan.rows]
        assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))

    def test_csv_header(self):
        pol = grid2d.ScanPolicy(points_per_unit_y=12, x_half_width=4.0)
        scan = grid2d.transition_scan(ModelConfig(omega=1.0),
                                      [2.0, 3.0, 4.0], pol)
        lines = grid2d.scan_csv(scan).strip().split("\n")
        assert lines[0] == "Y,lambda0,c_fit,verdict"
        assert len(lines) == 4
