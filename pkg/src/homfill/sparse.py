"""Sparse integer matrices and their plain-text triplet form."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class SparseIntMatrix:
    rows: int
    cols: int
    entries: dict = field(default_factory=dict)  # (i, j) -> nonzero int

    def __post_init__(self):
        clean = {}
        for (i, j), v in self.entries.items():
            if not (0 <= i < self.rows and 0 <= j < self.cols):
                raise IndexError(f"entry ({i}, {j}) outside {self.rows}x{self.cols}")
            v = int(v)
            if v:
                clean[(int(i), int(j))] = v
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    @classmethod
    def from_dense(cls, rows_list) -> "SparseIntMatrix":
        m = len(rows_list)
        n = len(rows_list[0]) if m else 0
        return cls(m, n, {(i, j): v for i, r in enumerate(rows_list) for j, v in enumerate(r) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            out[i][j] = v
        return out

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def transpose(self) -> "SparseIntMatrix":
        return SparseIntMatrix(self.cols, self.rows, {(j, i): v for (i, j), v in self.entries.items()})

    def column(self, j: int) -> dict[int, int]:
        return {i: v for (i, jj), v in self.entries.items() if jj == j}

    def columns(self) -> list[dict[int, int]]:
        cols = [dict() for _ in range(self.cols)]
        for (i, j), v in self.entries.items():
            cols[j][i] = v
        return cols

    def row_dicts(self) -> list[dict[int, int]]:
        rows = [dict() for _ in range(self.rows)]
        for (i, j), v in self.entries.items():
            rows[i][j] = v
        return rows

    def matmul(self, other: "SparseIntMatrix") -> "SparseIntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        orows = other.row_dicts()
        out: dict[tuple[int, int], int] = {}
        for (i, k), v in self.entries.items():
            for j, w in orows[k].items():
                out[(i, j)] = out.get((i, j), 0) + v * w
        return SparseIntMatrix(self.rows, other.cols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def dumps(self) -> str:
        lines = [f"{self.rows} {self.cols}"]
        lines.extend(f"{i} {j} {v}" for (i, j), v in self.entries.items())
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "SparseIntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise ValueError("empty matrix dump")
        try:
            rows, cols = (int(t) for t in lines[0].split())
            entries = {}
            for ln in lines[1:]:
                i, j, v = (int(t) for t in ln.split())
                entries[(i, j)] = v
        except ValueError as exc:
            raise ValueError(f"malformed triplet dump: {exc}") from None
        return cls(rows, cols, entries)
