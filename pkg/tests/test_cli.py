import re
from pathlib import Path

import pytest

from isdkit.cli import EXIT_ERROR, EXIT_NOT_FOUND, EXIT_SOLVED, main
from isdkit.instance import read_instance


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def planted(tmp_path):
    prefix = tmp_path / "inst"
    code = main(["gen", "--n", "40", "--k", "20", "--w", "4",
                 "--seed", "7", "--out", str(prefix)])
    assert code == EXIT_SOLVED
    sol_hex = re.search(r"e=([0-9a-f]+)", (tmp_path / "inst.sol").read_text()).group(1)
    return tmp_path / "inst.sdp", sol_hex


class TestGen:
    def test_deterministic_files(self, tmp_path, capsys):
        for name in ("a", "b"):
            code, _, _ = run(capsys, "gen", "--n", 40, "--k", 20, "--w", 4,
                             "--seed", 7, "--out", tmp_path / name)
            assert code == EXIT_SOLVED
        assert (tmp_path / "a.sdp").read_bytes() == (tmp_path / "b.sdp").read_bytes()
        assert (tmp_path / "a.sol").read_bytes() == (tmp_path / "b.sol").read_bytes()

    def test_bad_dimensions(self, tmp_path, capsys):
        code, _, err = run(capsys, "gen", "--n", 10, "--k", 12, "--w", 2,
                           "--seed", 1, "--out", tmp_path / "x")
        assert code == EXIT_ERROR
        assert "k" in err

    def test_solution_in_separate_file(self, planted):
        inst_path, _ = planted
        assert "e=" not in inst_path.read_text()


class TestDecodeVerify:
    def test_prange_roundtrip(self, planted, capsys):
        inst_path, _ = planted
        code, out, _ = run(capsys, "decode", inst_path, "--variant", "prange",
                           "--auto", "--seed", 3, "--budget", 100000)
        assert code == EXIT_SOLVED
        sol = re.search(r"solution=([0-9a-f]+)", out).group(1)
        code, out, _ = run(capsys, "verify", inst_path, "--solution", sol)
        assert code == EXIT_SOLVED
        assert "pass" in out

    def test_budget_zero_not_found(self, planted, capsys):
        inst_path, _ = planted
        code, out, _ = run(capsys, "decode", inst_path, "--auto",
                           "--seed", 3, "--budget", 0)
        assert code == EXIT_NOT_FOUND
        assert re.search(r"permutations\s+0", out)

    def test_reports_byte_identical(self, planted, capsys):
        inst_path, _ = planted
        outs = []
        for _ in range(2):
            code, out, _ = run(capsys, "decode", inst_path, "--auto",
                               "--seed", 5, "--budget", 100000)
            assert code == EXIT_SOLVED
            outs.append(out)
        assert outs[0] == outs[1]

    def test_infeasible_params_named(self, planted, capsys):
        inst_path, _ = planted
        code, _, err = run(capsys, "decode", inst_path, "--params",
                           "p=2,p1=2,l1=30,l2=30", "--seed", 1)
        assert code == EXIT_ERROR
        assert "l1+l2" in err

    def test_verify_rejects_flipped_bit(self, planted, capsys):
        inst_path, sol_hex = planted
        flipped = format(int(sol_hex, 16) ^ 1, f"0{len(sol_hex)}x")
        code, out, _ = run(capsys, "verify", inst_path, "--solution", flipped)
        assert code == EXIT_NOT_FOUND
        assert "fail" in out

    def test_verify_planted(self, planted, capsys):
        inst_path, sol_hex = planted
        code, _, _ = run(capsys, "verify", inst_path, "--solution", sol_hex)
        assert code == EXIT_SOLVED


class TestDoomCommand:
    def test_multi_syndrome_solved(self, tmp_path, capsys):
        run(capsys, "gen", "--n", 36, "--k", 18, "--w", 3, "--N", 6,
            "--seed", 11, "--out", tmp_path / "m")
        code, out, _ = run(capsys, "doom", tmp_path / "m.sdp", "--auto",
                           "--seed", 5, "--budget", 100000)
        assert code == EXIT_SOLVED
        sol, idx = re.search(r"solution=([0-9a-f]+) index=(\d+)", out).groups()
        code, _, _ = run(capsys, "verify", tmp_path / "m.sdp",
                         "--solution", sol, "--index", idx)
        assert code == EXIT_SOLVED


class TestPrecomputeOnline:
    def test_offline_online_roundtrip(self, planted, tmp_path, capsys):
        inst_path, _ = planted
        bundle = tmp_path / "b.pre"
        code, out, _ = run(capsys, "precompute", inst_path, "--auto",
                           "--seed", 9, "--out", bundle)
        assert code == EXIT_SOLVED
        code, out, _ = run(capsys, "online", bundle, inst_path)
        assert code == EXIT_SOLVED
        # the online phase runs no elimination and no syndrome-free joins
        assert re.search(r"gauss_eliminations\s+0", out)
        assert re.search(r"l12_joins\s+0", out)

    def test_mismatched_bundle_rejected(self, planted, tmp_path, capsys):
        inst_path, _ = planted
        bundle = tmp_path / "b.pre"
        run(capsys, "precompute", inst_path, "--auto", "--seed", 9,
            "--out", bundle)
        run(capsys, "gen", "--n", 40, "--k", 20, "--w", 4, "--seed", 8,
            "--out", tmp_path / "other")
        code, _, err = run(capsys, "online", bundle, tmp_path / "other.sdp")
        assert code == EXIT_ERROR
        assert "different parity-check matrix" in err

    def test_batch_lines(self, tmp_path, capsys):
        run(capsys, "gen", "--n", 36, "--k", 18, "--w", 3, "--N", 10,
            "--seed", 21, "--out", tmp_path / "m")
        bundle = tmp_path / "m.pre"
        code, _, _ = run(capsys, "precompute", tmp_path / "m.sdp", "--auto",
                         "--seed", 2, "--out", bundle)
        assert code == EXIT_SOLVED
        code, out, _ = run(capsys, "online", bundle, tmp_path / "m.sdp",
                           "--batch")
        lines = [l for l in out.splitlines() if l.startswith("syndrome ")]
        assert len(lines) == 10


class TestEstimateCommand:
    CFG = 'scheme toy-a cat=1 kind=message n=120 k=60 w=8 src="synthetic"\n' \
          'scheme toy-b cat=3 kind=message n=160 k=80 w=11 src="synthetic"\n'

    def write_cfg(self, tmp_path):
        cfg = tmp_path / "s.cfg"
        cfg.write_text(self.CFG)
        return cfg

    def test_table_and_records(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        rec = tmp_path / "rec.txt"
        code, out, _ = run(capsys, "estimate", "--config", cfg,
                           "--variants", "prange,dumer", "--emit-records", rec)
        assert code == EXIT_SOLVED
        assert "toy-a" in out and "toy-b" in out
        lines = rec.read_text().splitlines()
        assert len(lines) == 4
        assert all(l.startswith("record=estimate") for l in lines)

    def test_doom_one_equals_total(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        rec = tmp_path / "rec.txt"
        code, _, _ = run(capsys, "estimate", "--config", cfg, "--schemes",
                         "toy-a", "--doom", 1, "--emit-records", rec)
        assert code == EXIT_SOLVED
        row = rec.read_text()
        t = float(re.search(r" T=([\d.]+)", row).group(1))
        tn = float(re.search(r"TN=([\d.]+)", row).group(1))
        assert t == tn

    def test_category_ordering(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        rec = tmp_path / "rec.txt"
        code, _, _ = run(capsys, "estimate", "--config", cfg,
                         "--variants", "dumer", "--emit-records", rec)
        assert code == EXIT_SOLVED
        totals = [float(m) for m in re.findall(r" T=([\d.]+)", rec.read_text())]
        assert totals[1] > totals[0]

    def test_unknown_scheme_filter(self, tmp_path, capsys):
        cfg = self.write_cfg(tmp_path)
        code, _, err = run(capsys, "estimate", "--config", cfg,
                           "--schemes", "nothing")
        assert code == EXIT_ERROR
        assert "no scheme row" in err

    def test_half_filled_config_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("scheme x cat=1 kind=message n=100 k=50\n")
        code, _, err = run(capsys, "estimate", "--config", cfg)
        assert code == EXIT_ERROR
        assert "NIST" in err


class TestOracleCommand:
    def test_lists_solutions(self, planted, capsys):
        inst_path, sol_hex = planted
        code, out, _ = run(capsys, "oracle", inst_path)
        assert code == EXIT_SOLVED
        assert sol_hex in out
