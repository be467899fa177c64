"""Word translation g_l -> g u^-h(g), g_r -> g v^-h(g) into G * <u, v>."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .salvetti import MorseDatum

_LETTER = re.compile(r"^([^\s_^]+)_([lr])(?:\^(-?1))?$")
_OUT = re.compile(r"^([^\s^]+)(?:\^(-?1))?$")


class WordError(ValueError):
    pass


@dataclass(frozen=True)
class WordMap:
    heights: MorseDatum

    def __post_init__(self):
        bad = {g: h for g, h in self.heights.heights.items() if h not in (-1, 0, 1)}
        if bad:
            g, h = sorted(bad.items())[0]
            raise WordError(f"generator {g} has height {h}; heights must lie in {{-1, 0, 1}}")

    def h_prime(self, word) -> int:
        """Extended height: h on G, and 1 on u and v."""
        total = 0
        for sym, e in word:
            total += e * (1 if sym in ("u", "v") else self.heights[sym])
        return total

    def translate(self, word):
        out = []
        for g, side, e in word:
            if g not in self.heights.heights:
                raise WordError(f"unknown generator {g}")
            h = self.heights[g]
            t = "u" if side == "l" else "v"
            piece = [(g, 1)] + ([(t, -h)] if h else [])
            if e == -1:
                piece = [(s, -x) for s, x in reversed(piece)]
            out.extend(piece)
        return out


def amalgam_embed(word, heights: MorseDatum):
    return WordMap(heights).translate(word)


def parse_word(text: str):
    """Parse ``a_l b_r^-1 ...`` into [(gen, side, exp), ...]."""
    out = []
    for tok in text.split():
        m = _LETTER.match(tok)
        if not m:
            raise WordError(f"bad letter {tok!r}; expected g_l, g_r, g_l^-1 or g_r^-1")
        out.append((m.group(1), m.group(2), int(m.group(3) or 1)))
    return out


def format_word(word) -> str:
    return " ".join(s if e == 1 else f"{s}^-1" for s, e in word)
