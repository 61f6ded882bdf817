"""Fixture parsing and atomic artifact writing for the CLI."""

from __future__ import annotations

import json
import os
import tempfile

import numpy as np

from .errors import ValidationError
from .probability import Alphabet, ConditionalKernel, FinitePmf


def load_channel_fixture(obj: dict) -> tuple[ConditionalKernel, FinitePmf, str]:
    """Parse a channel fixture: alphabets, state prior, and the transition
    tensor in row-major (x1, x2, s) -> y order."""
    try:
        sizes = obj["alphabets"]
        ns, nx1, nx2, ny = (int(sizes[k]) for k in ("S", "X1", "X2", "Y"))
        q_s = np.asarray(obj["q_s"], dtype=np.float64)
        w = np.asarray(obj["W"], dtype=np.float64).reshape(nx1, nx2, ns, ny)
    except (KeyError, TypeError, json.JSONDecodeError) as exc:
        raise ValidationError(f"malformed channel fixture: {exc}") from exc
    channel = ConditionalKernel(
        (Alphabet(nx1), Alphabet(nx2), Alphabet(ns)), (Alphabet(ny),), w
    )
    prior = FinitePmf(Alphabet(ns), q_s)
    return channel, prior, obj.get("name", "")


def channel_fixture_json(channel: ConditionalKernel, q_s: FinitePmf, name: str = "") -> dict:
    nx1, nx2, ns = (a.size for a in channel.input_alphabets)
    ny = channel.output_alphabets[0].size
    return {
        "name": name,
        "alphabets": {"S": ns, "X1": nx1, "X2": nx2, "Y": ny},
        "q_s": q_s.probs.tolist(),
        "W": channel.table.ravel().tolist(),
    }


def atomic_write(path: str, data: str) -> None:
    """Write via a temp file in the same directory plus rename."""
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def dump_json(obj, indent: int = 2) -> str:
    return json.dumps(obj, indent=indent, sort_keys=True) + "\n"
