"""
Assemble report sections into one plaintext document.
"""


class ReportGenerator:
    """
    An ordered list of ``ReportSection`` objects rendered one after the
    other. The finished text always ends in exactly one newline.
    """
    def __init__(self, report_sections: list = None):
        self.report_sections = [] if report_sections is None else report_sections

    def add_section(self, section) -> 'ReportGenerator':
        self.report_sections.append(section)
        return self

    def generate_report_text(self) -> str:
        text = ''.join(section.render() for section in self.report_sections)
        return text.rstrip('\n') + '\n' if text else text

    def write_report_to_file(self, output_fp, mode: str = 'w') -> str:
        """
        Write the report to ``output_fp`` (``\\n`` line endings on every
        platform).

        :return: The text written.
        """
        text = self.generate_report_text()
        with open(output_fp, mode, newline='\n') as file:
            file.write(text)
        return text


__all__ = [
    'ReportGenerator',
]
