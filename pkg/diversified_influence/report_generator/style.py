"""
Formatting options shared by every report section.
"""

from dataclasses import dataclass


@dataclass
class Style:
    """
    Templates take a single ``{}`` placeholder:

    * ``title_template``  (e.g. ``'{}'``, ``'== {} =='``)
    * ``subtitle_template``  (e.g. ``'---- {} ----'``)
    * ``note_template``  (footer lines, e.g. ``'({})'``)
    * ``bullet_template``  (e.g. ``' >> {}'``, ``' * {}'``)
    * ``float_template``  (e.g. ``'{:.6f}'``, ``'{:.3g}'``)

    A line item with a value pads its bulleted label to ``label_width``
    characters before appending the value. Missing values print as
    ``missing``.

    Table cells are right-aligned and joined with ``column_gap``.

    ``blank_lines_before`` and ``blank_lines_after`` count newline
    characters written around each rendered section.
    """
    title_template: str = '{}'
    subtitle_template: str = '---- {} ----'
    note_template: str = '{}'
    bullet_template: str = ' >> {}'
    label_width: int = 35
    float_template: str = '{:.6f}'
    missing: str = 'n/a'
    column_gap: str = '  '
    blank_lines_before: int = 0
    blank_lines_after: int = 2


__all__ = [
    'Style',
]
