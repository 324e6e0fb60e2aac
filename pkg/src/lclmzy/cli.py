"""Command-line front end.

Subcommands: encrypt, decrypt, analyze, attack, dump-trajectory, selftest.
Exit codes: 0 success, 2 usage error, 3 I/O error, 4 format or key-material
error, 5 selftest failure.  Output files are written atomically after all
inputs have been read and validated, so a failing invocation never leaves a
partial artifact behind.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import analysis, formats, keymat, pipeline, sbox, trigram
from .chaos import ChaosParams, ChaosState, step
from .cipher import QF_MAP, qf_permute
from .errors import LclmzyError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_FORMAT = 4
EXIT_SELFTEST = 5


def _atomic_write(path: str, data: bytes):
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=str(target.parent) or ".", prefix=target.name + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        os.unlink(tmp)
        raise


def _read_image(path: str, bundle: keymat.KeyBundle | None) -> pipeline.Raster:
    if path.endswith((".raw", ".rgb")):
        if bundle is None:
            raise LclmzyError("raw images need a bundle for their dimensions")
        return formats.read_raw_rgb(path, bundle.width, bundle.height)
    return formats.read_ppm(path)


def _write_image(path: str, img: pipeline.Raster):
    if path.endswith((".raw", ".rgb")):
        _atomic_write(path, img.to_array().tobytes())
    else:
        header = f"P6\n{img.width} {img.height}\n255\n".encode("ascii")
        _atomic_write(path, header + img.to_array().tobytes())


def _load_or_create_bundle(args) -> keymat.KeyBundle:
    if getattr(args, "fresh_keys", False):
        return keymat.fresh_bundle(
            rounds=8 if args.rounds is None else args.rounds,
            zy_enabled=not args.no_zy,
        )
    bundle = formats.read_bundle(args.bundle)
    overrides = {}
    if args.rounds is not None and args.rounds != bundle.rounds:
        overrides["rounds"] = args.rounds
    if args.no_zy and bundle.zy_enabled:
        overrides["zy_enabled"] = False
    if overrides:
        bundle = replace(bundle, **overrides)
    return bundle


def _cmd_encrypt(args) -> int:
    bundle = _load_or_create_bundle(args)
    img = _read_image(args.infile, bundle)
    cipher, completed = pipeline.encrypt_image(img, bundle)
    _atomic_write(args.out, formats.cipher_image_to_bytes(cipher))
    _atomic_write(args.bundle, formats.serialize_bundle(completed).encode("utf-8"))
    return EXIT_OK


def _cmd_decrypt(args) -> int:
    bundle = formats.read_bundle(args.bundle)
    cipher = formats.read_cipher_image(args.infile)
    img = pipeline.decrypt_image(cipher, bundle)
    _write_image(args.out, img)
    return EXIT_OK


def _planes_from_input(args) -> tuple[list[np.ndarray], int, int]:
    data = Path(args.infile).read_bytes()
    if data[: len(formats.CIPHER_MAGIC)] == formats.CIPHER_MAGIC:
        cipher = formats.cipher_image_from_bytes(data)
        return [cipher.channel_plane(i) for i in range(3)], cipher.width, cipher.height
    img = formats.read_ppm(args.infile)
    return list(img.planes), img.width, img.height


def _cmd_analyze(args) -> int:
    planes, width, height = _planes_from_input(args)
    report = analysis.evaluate_planes(planes, seed=args.seed)
    out = [f"# {args.infile}: {width}x{height}"]
    out.extend(report.lines())
    text = "\n".join(out) + "\n"
    if args.out:
        _atomic_write(args.out, text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    if args.hist_csv:
        rows = ["level,r,g,b"]
        hists = [analysis.histogram(p) for p in planes]
        for level in range(256):
            rows.append(f"{level},{hists[0][level]},{hists[1][level]},{hists[2][level]}")
        _atomic_write(args.hist_csv, ("\n".join(rows) + "\n").encode("utf-8"))
    return EXIT_OK


def _parse_crop(geometry: str) -> tuple[int, int, int, int]:
    parts = geometry.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("crop geometry must be X,Y,W,H")
    try:
        x, y, w, h = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("crop geometry must be four integers") from None
    return x, y, w, h


_NOISE_KINDS = {"gaussian": "gaussian", "sp": "salt_pepper", "speckle": "speckle"}


def _cmd_attack(args) -> int:
    if (args.noise is None) == (args.crop is None):
        raise UsageError("attack needs exactly one of --noise or --crop")
    if args.noise is not None and args.level is None:
        raise UsageError("--noise requires --level")
    bundle = formats.read_bundle(args.bundle)
    cipher = formats.read_cipher_image(args.infile)
    reference = pipeline.compress_image(
        _read_image(args.ref, bundle), bundle.width, bundle.height
    )

    attacked = []
    for i in range(3):
        plane = cipher.channel_plane(i)
        if args.noise is not None:
            plane = analysis.add_noise(plane, _NOISE_KINDS[args.noise], args.level, seed=args.seed + i)
        else:
            plane = analysis.crop_attack(plane, *args.crop)
        attacked.append(plane.tobytes())
    damaged = pipeline.CipherImage(cipher.width, cipher.height, tuple(attacked))
    recovered = pipeline.decrypt_image(damaged, bundle)

    lines = []
    if args.noise == "speckle":
        lines.append("# speckle level is a variance on the normalized intensity scale")
    what = f"noise={args.noise} level={args.level}" if args.noise else f"crop={args.crop}"
    lines.append(f"# attack: {what}")
    for name, ref_plane, out_plane in zip(("r", "g", "b"), reference.planes, recovered.planes):
        lines.append(f"psnr.{name} = {analysis.psnr(ref_plane, out_plane):.4f}")
    lines.append(f"psnr.all = {analysis.psnr_planes(reference.planes, recovered.planes):.4f}")
    text = "\n".join(lines) + "\n"
    sys.stdout.write(text)
    if args.out:
        _write_image(args.out, recovered)
    return EXIT_OK


def _cmd_dump_trajectory(args) -> int:
    if args.bundle:
        bundle = formats.read_bundle(args.bundle)
        params = bundle.params
        state = ChaosState(*bundle.base)
    else:
        params = ChaosParams()
        state = ChaosState(0.2, 0.4, 0.1)
    for _ in range(args.burn_in):
        state = step(state, params)
    rows = []
    for _ in range(args.steps):
        state = step(state, params)
        rows.append(f"{state.x!r},{state.y!r},{state.z!r}")
    text = "\n".join(rows) + "\n"
    if args.out:
        _atomic_write(args.out, text.encode("utf-8"))
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _selftest_checks() -> list[tuple[str, bool]]:
    checks = [
        ("hu(101100) == 011110", trigram.hu(0b101100) == 0b011110),
        ("zong(101100) == 001101", trigram.zong(0b101100) == 0b001101),
        ("cuo(101100) == 010011", trigram.cuo(0b101100) == 0b010011),
        ("zy_encrypt(101101) == 001100", trigram.zy_encrypt(0b101101) == 0b001100),
    ]
    names = ("Qian", "Xun", "Li", "Gen", "Dui", "Kan", "Zhen", "Kun")
    table_ok = all(
        trigram.TRIGRAM_NAMES[(r ^ 7)] == names[r]
        and trigram.obfuscate_bits([r >> 2 & 1, r >> 1 & 1, r & 1], "0").tolist()
        == [(r ^ 7) >> 2 & 1, (r ^ 7) >> 1 & 1, (r ^ 7) & 1]
        for r in range(8)
    )
    checks.append(("obfuscation table rows 0..7", table_ok))
    qf_values = [qf_permute(w) for w in range(4096)]
    checks.append(("QF transposition bijective", sorted(qf_values) == list(range(4096))))
    probes_ok = all(
        qf_permute(1 << (11 - src)) == 1 << (11 - i) for i, src in enumerate(QF_MAP)
    )
    checks.append(("QF single-bit probes match the table", probes_ok))
    checks.append(
        ("zigzag prefix 0,1,8,16,9,2,3,10", sbox.ZIGZAG_ORDER[:8] == (0, 1, 8, 16, 9, 2, 3, 10))
    )
    return checks


def _cmd_selftest(_args) -> int:
    failures = 0
    for name, ok in _selftest_checks():
        print(f"{'ok' if ok else 'FAIL'}  {name}")
        failures += 0 if ok else 1
    return EXIT_OK if failures == 0 else EXIT_SELFTEST


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lclmzy",
        description="Chaos-keyed image cipher and cryptanalysis harness",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    enc = sub.add_parser("encrypt", help="encrypt an image, rewriting the bundle with digests")
    enc.add_argument("--in", dest="infile", required=True, help="plain image (PPM or raw)")
    enc.add_argument("--out", required=True, help="cipher-image output path")
    enc.add_argument("--bundle", required=True, help="key-bundle path (read and rewritten)")
    enc.add_argument("--fresh-keys", action="store_true", help="generate random keys instead of reading the bundle")
    enc.add_argument("--rounds", type=int, default=None, help="round count (default 8, or the bundle's value)")
    enc.add_argument("--no-zy", action="store_true", help="disable the trigram stage")
    enc.set_defaults(run=_cmd_encrypt)

    dec = sub.add_parser("decrypt", help="decrypt a cipher image")
    dec.add_argument("--in", dest="infile", required=True, help="cipher-image path")
    dec.add_argument("--out", required=True, help="decrypted image output path")
    dec.add_argument("--bundle", required=True)
    dec.set_defaults(run=_cmd_decrypt)

    ana = sub.add_parser("analyze", help="entropy, correlation and histogram report")
    ana.add_argument("--in", dest="infile", required=True, help="PPM or cipher-image path")
    ana.add_argument("--out", help="write the report here instead of stdout")
    ana.add_argument("--seed", type=int, default=0)
    ana.add_argument("--hist-csv", help="write a per-channel histogram CSV here")
    ana.set_defaults(run=_cmd_analyze)

    atk = sub.add_parser("attack", help="damage a cipher image, decrypt, report PSNR")
    atk.add_argument("--in", dest="infile", required=True, help="cipher-image path")
    atk.add_argument("--bundle", required=True)
    atk.add_argument("--ref", required=True, help="original plain image for the PSNR reference")
    atk.add_argument("--noise", choices=sorted(_NOISE_KINDS))
    atk.add_argument("--level", type=float, help="noise density or variance")
    atk.add_argument("--crop", type=_parse_crop, metavar="X,Y,W,H")
    atk.add_argument("--seed", type=int, default=0)
    atk.add_argument("--out", help="optionally save the recovered image")
    atk.set_defaults(run=_cmd_attack)

    dump = sub.add_parser("dump-trajectory", help="write x,y,z CSV lines of the chaotic orbit")
    dump.add_argument("--out", help="CSV output path (stdout when omitted)")
    dump.add_argument("--steps", type=int, default=2000)
    dump.add_argument("--burn-in", dest="burn_in", type=int, default=0)
    dump.add_argument("--bundle", help="take parameters and initial values from this bundle")
    dump.set_defaults(run=_cmd_dump_trajectory)

    selftest = sub.add_parser("selftest", help="run the built-in golden vectors")
    selftest.set_defaults(run=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LclmzyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FORMAT


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
