"""Batch command-line front end.

Subcommands: denoise, metrics, phantom, project, decompose. Exit codes:
0 success, 2 bad flags (argparse), 3 I/O errors, 4 shape/config/validation
errors. SHEARVOL_THREADS caps FFT parallelism.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import baselines, metrics, phantom, volio
from .denoise import DenoiseParams, denoise_volume, denoise_volume_2d, format_stats_table
from .errors import ShearvolError, ValidationError, VolumeIOError
from .grid import VolumeGrid
from .system import ShearletConfig, build_system
from .transform import decompose
from .volio import SlabSpec

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_SHAPE = 4


def _parse_levels(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise ValidationError(f"--shear-levels must be comma-separated integers, got {text!r}")


def _config_for(dims, scales: int, shear_levels: str) -> ShearletConfig:
    levels = _parse_levels(shear_levels)
    return ShearletConfig(num_scales=scales, shear_levels=levels, dims=tuple(dims))


def _add_system_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scales", type=int, default=2,
                   help="number of scales (default 2)")
    p.add_argument("--shear-levels", default="0,1",
                   help="comma-separated shear level per scale (default 0,1)")


def cmd_denoise(args) -> int:
    volume = volio.read_volume(args.infile)
    if volume.values.ndim != 3:
        raise ValidationError(f"--in {args.infile}: denoise needs a 3D volume")

    stats = None
    if args.method == "shearlet":
        params = DenoiseParams(sigma=args.sigma, tl=args.tl, mode=args.mode)
        if args.mode == "3d":
            config = _config_for(volume.dims, args.scales, args.shear_levels)
            result, stats = denoise_volume(volume, config, params)
        else:
            config = _config_for(volume.dims[:2], args.scales, args.shear_levels)
            result, stats = denoise_volume_2d(volume, config, params)
    elif args.method == "median-sub":
        result = baselines.median_subtract(volume)
    else:  # pixel-avg
        result = baselines.pixel_average_axial(volume, window=args.window)

    volio.write_volume(args.out, result)
    if args.stats:
        if stats is None:
            raise ValidationError(f"--stats applies only to --method shearlet")
        try:
            with open(args.stats, "w") as fh:
                fh.write(format_stats_table(stats) + "\n")
        except OSError as exc:
            raise VolumeIOError(f"{args.stats}: {exc}") from exc
    return EXIT_OK


def cmd_metrics(args) -> int:
    a = volio.read_volume(args.infile)
    records = []
    if args.ref is not None:
        ref = volio.read_volume(args.ref)
        err = metrics.mse(a, ref)
        records.append(("mse", err, {}))
        records.append(("psnr", metrics.psnr(a, ref, data_range=args.data_range),
                        {"data_range": args.data_range}))
        records.append(("ssim", metrics.ssim(a, ref, data_range=args.data_range),
                        {"data_range": args.data_range}))
    if args.octa_snr:
        center = None
        if args.center:
            cx, cy = (float(v) for v in args.center.split(","))
            center = (cx, cy)
        roi = metrics.AnnulusSpec(center=center,
                                  inner_diameter_mm=args.inner_mm,
                                  outer_diameter_mm=args.outer_mm,
                                  pixel_pitch_mm=args.pitch_mm)
        records.append(("octa_snr", metrics.octa_snr(a.values, roi),
                        {"inner_mm": args.inner_mm, "outer_mm": args.outer_mm,
                         "pitch_mm": round(args.pitch_mm, 9)}))
    if not records:
        raise ValidationError("nothing to compute: pass --ref and/or --octa-snr")
    if args.format == "records":
        print(metrics.format_records(records))
    else:
        print(metrics.format_table(records))
    return EXIT_OK


def cmd_phantom(args) -> int:
    try:
        with open(args.spec) as fh:
            text = fh.read()
    except OSError as exc:
        raise VolumeIOError(f"{args.spec}: {exc}") from exc
    spec = phantom.parse_spec_text(text)
    if isinstance(spec, phantom.OctPhantomSpec):
        clean, noisy = phantom.gen_oct_phantom(spec, args.seed)
    else:
        clean, noisy = phantom.gen_octa_phantom(spec, args.seed)
    volio.write_volume(args.clean, clean)
    volio.write_volume(args.noisy, noisy)
    return EXIT_OK


def cmd_project(args) -> int:
    volume = volio.read_volume(args.infile)
    if args.top is not None or args.bottom is not None:
        if args.top is None or args.bottom is None:
            raise ValidationError("--top and --bottom must be given together")
        slab = SlabSpec(mode=args.mode,
                        top=volio.read_image(args.top),
                        bottom=volio.read_image(args.bottom))
    else:
        if args.z0 is None or args.z1 is None:
            raise ValidationError("pass either --z0/--z1 or --top/--bottom")
        slab = SlabSpec(mode=args.mode, z0=args.z0, z1=args.z1)
    image = volio.enface_project(volume, slab)
    volio.write_pgm(args.out, image)
    return EXIT_OK


def cmd_decompose(args) -> int:
    import os

    volume = volio.read_volume(args.infile)
    if volume.values.ndim != 3:
        raise ValidationError(f"--in {args.infile}: decompose needs a 3D volume")
    config = _config_for(volume.dims, args.scales, args.shear_levels)
    system = build_system(config)
    if args.subbands == "all":
        wanted = range(len(system.filters))
    else:
        try:
            wanted = [int(v) for v in args.subbands.split(",") if v.strip()]
        except ValueError:
            raise ValidationError(f"--subbands must be 'all' or comma-separated "
                                  f"indices, got {args.subbands!r}")
        bad = [i for i in wanted if not 0 <= i < len(system.filters)]
        if bad:
            raise ValidationError(f"--subbands indices out of range: {bad} "
                                  f"(system has {len(system.filters)} filters)")
    stack = decompose(volume, system)
    os.makedirs(args.out_dir, exist_ok=True)
    for i in wanted:
        idx, coeffs = stack.subbands[i]
        out = os.path.join(args.out_dir, f"subband_{i:03d}_{idx.label()}.shvol")
        volio.write_volume(out, VolumeGrid(coeffs, pitch=volume.pitch,
                                           intensity_range=volume.intensity_range))
        print(f"{i:3d}  {idx.label()}  -> {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shearvol",
        description="Volumetric shearlet denoising toolkit for OCT/OCTA-style data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="denoise a volume")
    p.add_argument("--in", dest="infile", required=True, help="input volume (.shvol)")
    p.add_argument("--out", required=True, help="output volume (.shvol)")
    p.add_argument("--mode", choices=("3d", "2d"), default="3d",
                   help="filter the whole volume or each B-scan (default 3d)")
    _add_system_flags(p)
    p.add_argument("--sigma", type=float, default=30.0,
                   help="assumed noise std on a 0..255 scale (default 30)")
    p.add_argument("--tl", type=float, default=2.5,
                   help="threshold level (default 2.5; 1.5 suits OCTA flow data)")
    p.add_argument("--method", choices=("shearlet", "median-sub", "pixel-avg"),
                   default="shearlet")
    p.add_argument("--window", type=int, default=6,
                   help="axial window for --method pixel-avg (default 6)")
    p.add_argument("--stats", help="write the per-subband stats table here")
    p.add_argument("--deterministic", action="store_true",
                   help="force the fixed subband reduction order (always on; "
                        "flag kept for scripting compatibility)")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("metrics", help="compare volumes/images")
    p.add_argument("--in", dest="infile", required=True, help="volume/image under test")
    p.add_argument("--ref", help="reference volume/image for mse/psnr/ssim")
    p.add_argument("--data-range", type=float, default=255.0)
    p.add_argument("--format", choices=("table", "records"), default="table")
    p.add_argument("--octa-snr", action="store_true",
                   help="also compute the en-face annulus/FAZ SNR of --in (2D input)")
    p.add_argument("--pitch-mm", type=float, default=metrics.DEFAULT_PITCH_MM)
    p.add_argument("--inner-mm", type=float, default=0.6)
    p.add_argument("--outer-mm", type=float, default=2.5)
    p.add_argument("--center", help="annulus center as x,y pixels (default image center)")
    p.set_defaults(func=cmd_metrics)

    p = sub.add_parser("phantom", help="generate a clean/noisy phantom pair")
    p.add_argument("--spec", required=True, help="phantom spec file (key = value lines)")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--clean", required=True, help="output path for the clean volume")
    p.add_argument("--noisy", required=True, help="output path for the noisy volume")
    p.set_defaults(func=cmd_phantom)

    p = sub.add_parser("project", help="write an en-face projection as PGM")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="output PGM path")
    p.add_argument("--mode", choices=("max", "mean"), default="max")
    p.add_argument("--z0", type=int, help="flat slab start (inclusive)")
    p.add_argument("--z1", type=int, help="flat slab end (exclusive)")
    p.add_argument("--top", help="top surface depth map (.shvol, 2D)")
    p.add_argument("--bottom", help="bottom surface depth map (.shvol, 2D)")
    p.set_defaults(func=cmd_project)

    p = sub.add_parser("decompose", help="dump shearlet subbands as volumes")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    _add_system_flags(p)
    p.add_argument("--subbands", default="all",
                   help="'all' or comma-separated filter indices (default all)")
    p.set_defaults(func=cmd_decompose)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except VolumeIOError as exc:
        print(f"shearvol {args.command}: {exc}", file=sys.stderr)
        return EXIT_IO
    except ShearvolError as exc:
        print(f"shearvol {args.command}: {exc}", file=sys.stderr)
        return EXIT_SHAPE


if __name__ == "__main__":
    sys.exit(main())
