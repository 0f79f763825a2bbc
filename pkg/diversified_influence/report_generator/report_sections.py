"""
Report sections. Each one renders a body and frames it with an optional
title, subtitle and note.
"""

import pandas as pd

from .style import Style


class ReportSection:
    """
    Base section: holds the framing and the style. Subclasses supply
    ``body()``.
    """
    def __init__(
            self,
            header: str = None,
            subheader: str = None,
            footer: str = None,
            style: Style = None):
        self.header = header
        self.subheader = subheader
        self.footer = footer
        self.style = Style() if style is None else style

    def cell(self, value) -> str:
        """One value as text: floats through the style, ``None`` as missing."""
        if value is None:
            return self.style.missing
        if isinstance(value, float):
            return self.style.float_template.format(value)
        return str(value)

    def line_item(self, label: str, value: str = None) -> str:
        """
        A bulleted line. With a ``value``, the bulleted label is padded to
        ``style.label_width`` and the value follows it.
        """
        line = self.style.bullet_template.format(label)
        if value is None:
            return line
        return f"{line:<{self.style.label_width}}{value}"

    def body(self) -> str:
        return ''

    def render(self) -> str:
        """The framed section, with the style's surrounding newlines."""
        st = self.style
        lines = []
        if self.header is not None:
            lines.append(st.title_template.format(self.header))
        if self.subheader is not None:
            lines.append(st.subtitle_template.format(self.subheader))
        lines.append(self.body())
        if self.footer is not None:
            lines.append(st.note_template.format(self.footer))
        return '\n' * st.blank_lines_before + '\n'.join(lines) + '\n' * st.blank_lines_after


class TextBlockSection(ReportSection):
    """Free text."""
    def __init__(self, text: str, **framing):
        super().__init__(**framing)
        self.text = text

    def body(self):
        return self.text


class KeyValueSection(ReportSection):
    """``label: value`` line items, in the order given."""
    def __init__(self, items: list, **framing):
        """
        :param items: ``(label, value)`` pairs.
        """
        super().__init__(**framing)
        self.items = items

    def body(self):
        if not self.items:
            return self.line_item(self.style.missing)
        return '\n'.join(
            self.line_item(f"{label}:", self.cell(value)) for label, value in self.items)


class SeedListSection(ReportSection):
    """
    Numbered seeds in selection order, optionally with the marginal gain
    each one added.
    """
    def __init__(self, seeds: list, gains: list = None, **framing):
        super().__init__(**framing)
        self.seeds = seeds
        self.gains = gains

    def body(self):
        if not self.seeds:
            return self.line_item('(no seeds)')
        lines = []
        for rank, seed in enumerate(self.seeds, start=1):
            gain = None if self.gains is None else f"gain {self.cell(float(self.gains[rank - 1]))}"
            lines.append(self.line_item(f"{rank}. {seed}", gain))
        return '\n'.join(lines)


class TableSection(ReportSection):
    """
    A ``DataFrame`` as right-aligned text columns under their names (the
    index is not shown). NaN cells print as missing.
    """
    def __init__(self, df: pd.DataFrame, **framing):
        super().__init__(**framing)
        self.df = df

    def _table_cell(self, value) -> str:
        if isinstance(value, float) and pd.isna(value):
            return self.style.missing
        if hasattr(value, 'item'):
            value = value.item()
        return self.cell(value)

    def body(self):
        if self.df.empty:
            return self.line_item('(empty)')
        columns = [
            [str(name)] + [self._table_cell(v) for v in self.df[name]]
            for name in self.df.columns
        ]
        widths = [max(map(len, col)) for col in columns]
        rows = zip(*(
            [text.rjust(width) for text in col] for col, width in zip(columns, widths)))
        return '\n'.join(self.style.column_gap.join(row).rstrip() for row in rows)


__all__ = [
    'ReportSection',
    'TextBlockSection',
    'KeyValueSection',
    'SeedListSection',
    'TableSection',
]
