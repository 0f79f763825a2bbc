import pandas as pd

from diversified_influence.report_generator import (
    KeyValueSection,
    ReportGenerator,
    SeedListSection,
    Style,
    TableSection,
    TextBlockSection,
)


def test_text_block_with_header_and_footer():
    section = TextBlockSection('body', header='HEADER', subheader='sub', footer='end')
    assert section.render() == 'HEADER\n---- sub ----\nbody\nend\n\n'


def test_key_value_section():
    style = Style(label_width=12, float_template='{:.2f}')
    section = KeyValueSection([('Spread', 1.25), ('Entropy', None), ('Seeds', 3)], style=style)
    assert section.body().split('\n') == [
        ' >> Spread: 1.25',
        ' >> Entropy:n/a',
        ' >> Seeds:  3',
    ]


def test_empty_key_value_section():
    assert KeyValueSection([]).body() == ' >> n/a'


def test_seed_list_section():
    plain = SeedListSection(['a', 'b'])
    assert plain.body() == ' >> 1. a\n >> 2. b'
    with_gains = SeedListSection(['a'], gains=[0.5], style=Style(label_width=10))
    assert with_gains.body() == ' >> 1. a  gain 0.500000'
    assert SeedListSection([]).body() == ' >> (no seeds)'


def test_table_section():
    df = pd.DataFrame({'method': ['im', 'ces'], 'entropy': [0.0, float('nan')]})
    body = TableSection(df).body()
    assert body.split('\n') == [
        'method   entropy',
        '    im  0.000000',
        '   ces       n/a',
    ]
    assert TableSection(pd.DataFrame()).body() == ' >> (empty)'


def test_generator_collapses_trailing_blank_lines(tmp_path):
    report = ReportGenerator()
    report.add_section(TextBlockSection('one', header='A')).add_section(TextBlockSection('two'))
    text = report.generate_report_text()
    assert text == 'A\none\n\ntwo\n'
    fp = tmp_path / 'report.txt'
    assert report.write_report_to_file(fp) == text
    assert fp.read_text() == text


def test_empty_report():
    assert ReportGenerator().generate_report_text() == ''
