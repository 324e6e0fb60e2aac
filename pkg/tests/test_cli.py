"""Command-line behavior: exit codes, artifacts, determinism."""

import numpy as np
import pytest

from lclmzy import formats
from lclmzy.cli import main
from lclmzy.keymat import KeyBundle
from lclmzy.pipeline import Raster, compress_image

from conftest import DIGIT_KEY, HEX_KEY


@pytest.fixture
def workdir(tmp_path, bundle):
    rng = np.random.default_rng(31)
    img = Raster.from_array(rng.integers(0, 256, (240, 240, 3)).astype(np.uint8))
    formats.write_ppm(tmp_path / "plain.ppm", img)
    formats.write_bundle(tmp_path / "keys.txt", bundle)
    return tmp_path


def run(*argv) -> int:
    return main([str(a) for a in argv])


class TestEncryptDecrypt:
    def test_round_trip(self, workdir):
        assert run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
                   "--out", workdir / "img.lcz") == 0
        assert run("decrypt", "--in", workdir / "img.lcz", "--bundle", workdir / "keys.txt",
                   "--out", workdir / "out.ppm") == 0
        assert (workdir / "out.ppm").read_bytes() == (workdir / "plain.ppm").read_bytes()

    def test_bundle_rewritten_with_digests(self, workdir):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        rewritten = formats.read_bundle(workdir / "keys.txt")
        assert rewritten.has_digests
        assert rewritten.hex_key == HEX_KEY and rewritten.digit_key == DIGIT_KEY

    def test_deterministic_cipher_files(self, workdir):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "a.lcz")
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "b.lcz")
        assert (workdir / "a.lcz").read_bytes() == (workdir / "b.lcz").read_bytes()

    def test_no_zy_changes_the_cipher_file(self, workdir):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "zy.lcz")
        formats.write_bundle(workdir / "keys2.txt",
                             formats.read_bundle(workdir / "keys.txt"))
        assert run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys2.txt",
                   "--out", workdir / "nzy.lcz", "--no-zy") == 0
        assert (workdir / "zy.lcz").read_bytes() != (workdir / "nzy.lcz").read_bytes()
        assert formats.read_bundle(workdir / "keys2.txt").zy_enabled is False
        # and the no-zy file still decrypts
        assert run("decrypt", "--in", workdir / "nzy.lcz", "--bundle", workdir / "keys2.txt",
                   "--out", workdir / "nzy.ppm") == 0
        assert (workdir / "nzy.ppm").read_bytes() == (workdir / "plain.ppm").read_bytes()

    def test_fresh_keys_creates_bundle(self, workdir):
        assert run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "fresh.txt",
                   "--out", workdir / "f.lcz", "--fresh-keys") == 0
        fresh = formats.read_bundle(workdir / "fresh.txt")
        assert fresh.has_digests
        assert run("decrypt", "--in", workdir / "f.lcz", "--bundle", workdir / "fresh.txt",
                   "--out", workdir / "f.ppm") == 0
        assert (workdir / "f.ppm").read_bytes() == (workdir / "plain.ppm").read_bytes()

    def test_bundle_with_other_round_count(self, workdir):
        formats.write_bundle(workdir / "k4.txt",
                             KeyBundle(hex_key="a1b2c3d4e5f6a1b2c3d4e5f6", digit_key="123", rounds=4))
        assert run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "k4.txt",
                   "--out", workdir / "r4.lcz") == 0
        assert run("decrypt", "--in", workdir / "r4.lcz", "--bundle", workdir / "k4.txt",
                   "--out", workdir / "r4.ppm") == 0
        assert (workdir / "r4.ppm").read_bytes() == (workdir / "plain.ppm").read_bytes()

    def test_non_square_input_is_compressed(self, workdir, photo):
        formats.write_ppm(workdir / "photo.ppm", photo)
        run("encrypt", "--in", workdir / "photo.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "p.lcz")
        run("decrypt", "--in", workdir / "p.lcz", "--bundle", workdir / "keys.txt",
            "--out", workdir / "p.ppm")
        assert formats.read_ppm(workdir / "p.ppm") == compress_image(photo, 240, 240)


class TestExitCodes:
    def test_usage_error_is_2(self):
        assert run("encrypt", "--in", "x.ppm") == 2
        assert run("no-such-command") == 2

    def test_missing_input_is_3(self, workdir):
        assert run("encrypt", "--in", workdir / "nope.ppm", "--bundle", workdir / "keys.txt",
                   "--out", workdir / "x.lcz") == 3

    def test_format_error_is_4(self, workdir):
        (workdir / "garbage.lcz").write_bytes(b"not a cipher image")
        assert run("decrypt", "--in", workdir / "garbage.lcz", "--bundle", workdir / "keys.txt",
                   "--out", workdir / "x.ppm") == 4

    def test_missing_digests_is_4(self, workdir):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        formats.write_bundle(workdir / "blank.txt",
                             KeyBundle(hex_key=HEX_KEY, digit_key=DIGIT_KEY))
        assert run("decrypt", "--in", workdir / "img.lcz", "--bundle", workdir / "blank.txt",
                   "--out", workdir / "x.ppm") == 4

    def test_failed_run_leaves_no_partial_output(self, workdir):
        run("encrypt", "--in", workdir / "nope.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "x.lcz")
        assert not (workdir / "x.lcz").exists()

    def test_attack_needs_exactly_one_mode(self, workdir):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        assert run("attack", "--in", workdir / "img.lcz", "--bundle", workdir / "keys.txt",
                   "--ref", workdir / "plain.ppm") == 2


class TestAnalyze:
    def test_report_lines_on_cipher_file(self, workdir, capsys):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        assert run("analyze", "--in", workdir / "img.lcz") == 0
        out = capsys.readouterr().out
        assert "entropy.r = " in out
        assert "correlation.g.vertical = " in out

    def test_histogram_csv(self, workdir):
        assert run("analyze", "--in", workdir / "plain.ppm",
                   "--hist-csv", workdir / "hist.csv") == 0
        lines = (workdir / "hist.csv").read_text().splitlines()
        assert lines[0] == "level,r,g,b"
        assert len(lines) == 257

    def test_report_to_file(self, workdir):
        assert run("analyze", "--in", workdir / "plain.ppm", "--out", workdir / "rep.txt") == 0
        assert "entropy.b = " in (workdir / "rep.txt").read_text()


class TestAttack:
    def test_noise_attack_reports_psnr(self, workdir, capsys):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        assert run("attack", "--in", workdir / "img.lcz", "--bundle", workdir / "keys.txt",
                   "--ref", workdir / "plain.ppm", "--noise", "sp", "--level", "0.001",
                   "--seed", "5", "--out", workdir / "rec.ppm") == 0
        out = capsys.readouterr().out
        assert "psnr.all = " in out
        assert (workdir / "rec.ppm").exists()

    def test_crop_attack_deterministic(self, workdir, capsys):
        run("encrypt", "--in", workdir / "plain.ppm", "--bundle", workdir / "keys.txt",
            "--out", workdir / "img.lcz")
        args = ("attack", "--in", workdir / "img.lcz", "--bundle", workdir / "keys.txt",
                "--ref", workdir / "plain.ppm", "--crop", "0,0,48,48")
        assert run(*args) == 0
        first = capsys.readouterr().out
        assert run(*args) == 0
        assert capsys.readouterr().out == first


class TestTrajectoryAndSelftest:
    def test_dump_trajectory(self, workdir):
        assert run("dump-trajectory", "--steps", "50", "--out", workdir / "t.csv") == 0
        lines = (workdir / "t.csv").read_text().splitlines()
        assert len(lines) == 50
        x, y, z = (float(v) for v in lines[0].split(","))
        assert (x, y, z) == (1.99 * 0.2 * 0.9, 1.99 * 0.4 * 0.9, 0.2 * 0.2 + 0.4 * 0.4)

    def test_dump_trajectory_round_trips_floats(self, workdir):
        run("dump-trajectory", "--steps", "200", "--burn-in", "100",
            "--out", workdir / "t.csv")
        for line in (workdir / "t.csv").read_text().splitlines():
            x, y, z = (float(v) for v in line.split(","))
            assert repr(x) in line and repr(z) in line

    def test_selftest_passes(self, capsys):
        assert run("selftest") == 0
        out = capsys.readouterr().out
        assert "FAIL" not in out and "ok" in out
