import csv
import io
from typing import Iterable

from ..general_base import GeneralBaseArtifact
from ..utils import convert_value


class SafeCommentLine(GeneralBaseArtifact):
    def __init__(self, content: str) -> None:
        """
        A pre-formatted line written as is, without quoting.

        CSV Use Case:
            Used for lines that must not go through the CSV quoting rules, such as the
            ``#`` comment lines at the top of every artifact.

        Example:
            SafeCommentLine("# status = partial")

        :param content: The full line, without the trailing newline.
        """
        self.content: str = content

    def to_string(self) -> str:
        return f"{self.content}\n"


class CommentLine(SafeCommentLine):
    def __init__(self, key: str, value: any) -> None:
        """
        A ``# key = value`` comment line.

        :param key: Name recorded in the comment.
        :param value: Value, converted with :func:`convert_value`.
        """
        self.key: str = key
        self.value: any = value
        super().__init__(f"# {key} = {convert_value(value)}")


class BaseCSVTable(GeneralBaseArtifact):
    def __init__(
            self,
            columns: Iterable[str],
            rows: Iterable[Iterable[any]] = None,
            custom_conversion_functions: list = None,
    ) -> None:
        """
        Initializes a CSV table: one header row naming the columns followed by data rows.

        CSV Use Case:
            Every experiment result is a table. Cells are converted with the default conversion
            functions (or custom ones) and quoted the RFC-4180 way by the ``csv`` module.

        Example:
            table = BaseCSVTable(["k", "relative_error"], [[1, 0.001], [2, 0.004]])

        :param columns: Column names, written as the header row.
        :param rows: Initial data rows; each must have one value per column.
        :param custom_conversion_functions: Conversion functions replacing the defaults.
        """
        self.columns: list[str] = list(columns)
        self.rows: list[list[any]] = []
        self.custom_conversion_functions: list = custom_conversion_functions
        for row in rows or []:
            self.add_row(row)

    def add_row(self, row: Iterable[any]) -> None:
        """
        Appends a data row.

        :param row: One value per column.
        :raises ValueError: If the row length differs from the number of columns.
        """
        row = list(row)
        if len(row) != len(self.columns):
            raise ValueError(f"row has {len(row)} values, table has {len(self.columns)} columns")
        self.rows.append(row)

    def _convert(self, value: any) -> str:
        return str(convert_value(value, conversion_functions_list=self.custom_conversion_functions))

    def to_string(self) -> str:
        """
        Generate the header and data rows.

        Example:
            For columns ["k", "e"] and a row [1, 0.5], returns 'k,e\\n1,0.5\\n'

        :return: The table as CSV text.
        """
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([self._convert(value) for value in row])
        return buffer.getvalue()
