"""Shared builders for the test suite."""

from __future__ import annotations

import os
import stat

import numpy as np

from kinsync.series import MultivariateTimeSeries


def mts(values, rate=30.0):
    return MultivariateTimeSeries(np.asarray(values, dtype=float), sample_rate_hz=rate)


def rand_series(rng, m, d, lo=-1.0, hi=1.0, rate=30.0):
    return mts(rng.uniform(lo, hi, size=(m, d)), rate)


def write_kin(path, array):
    array = np.atleast_2d(np.asarray(array, dtype=float))
    lines = [" ".join(format(v, ".10g") for v in row) for row in array]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


def write_meta(path, rows):
    # rows: iterable of token tuples, joined by whitespace
    lines = ["\t".join(str(t) for t in row) for row in rows]
    path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")


# A minimal encoder stand-in that understands the exact argument template
# render() uses, so the subprocess plumbing is testable on machines without
# ffmpeg. "Videos" are text files: a FAKEVID header then one payload line per
# frame. Extraction writes one file per frame; encoding reads them back.
STUB_ENCODER = """\
#!/usr/bin/env python3
import os
import sys


def arg_value(args, flag):
    return args[args.index(flag) + 1] if flag in args else None


def main():
    args = sys.argv[1:]
    inp = arg_value(args, "-i")
    out = args[-1] if args else None
    if inp is None or out is None:
        sys.stderr.write("stub: missing -i or output\\n")
        return 1
    if out.endswith(".png"):
        if not os.path.exists(inp):
            sys.stderr.write("stub: no such input: %s\\n" % inp)
            return 1
        with open(inp) as f:
            header = f.readline().split()
            if header[:1] != ["FAKEVID"]:
                sys.stderr.write("stub: %s is not a fake video\\n" % inp)
                return 1
            count = int(header[1])
            payloads = [f.readline().rstrip("\\n") for _ in range(count)]
        suffix = " gray" if "hue=s=0" in args else ""
        for k, payload in enumerate(payloads):
            with open(out % (k + 1), "w") as g:
                g.write(payload + suffix + "\\n")
        return 0
    frames = arg_value(args, "-frames:v")
    if frames is None:
        sys.stderr.write("stub: -frames:v required to encode\\n")
        return 1
    payloads = []
    for k in range(int(frames)):
        frame_path = inp % (k + 1)
        if not os.path.exists(frame_path):
            sys.stderr.write("stub: missing frame %s\\n" % frame_path)
            return 1
        with open(frame_path) as f:
            payloads.append(f.read().rstrip("\\n"))
    with open(out, "w") as g:
        g.write("FAKEVID %d\\n" % len(payloads))
        for payload in payloads:
            g.write(payload + "\\n")
    return 0


sys.exit(main())
"""


def make_stub_encoder(dirpath):
    path = os.path.join(str(dirpath), "fake-ffmpeg")
    with open(path, "w") as f:
        f.write(STUB_ENCODER)
    mode = os.stat(path).st_mode
    os.chmod(path, mode | stat.S_IXUSR | stat.S_IXGRP | stat.S_IXOTH)
    return path


def make_fake_video(path, payloads):
    with open(str(path), "w") as f:
        f.write("FAKEVID %d\n" % len(payloads))
        for payload in payloads:
            f.write("%s\n" % payload)
    return str(path)


def read_fake_video(path):
    with open(str(path)) as f:
        header = f.readline().split()
        assert header[0] == "FAKEVID"
        return [f.readline().rstrip("\n") for _ in range(int(header[1]))]
