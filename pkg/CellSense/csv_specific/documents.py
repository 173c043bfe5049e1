from .base import (BaseCSVTable, SafeCommentLine)
from .declarations import ProvenanceDeclaration
from ..general_base import (GeneralBaseArtifact, GroupedBaseArtifact)


PARTIAL_MARKER: str = "# status = partial"


class CSVDocument(GeneralBaseArtifact):
    """
    A complete CSV artifact: provenance comments, optional extra comments, then one table.

    CSV Use Cases:
        This class assembles the file written by every experiment. Extra comment lines can be
        appended to the head (for example the atom mass of a Marchenko-Pastur law) and the
        document can be marked partial when a run failed. A partial document has no table.

    Examples:
        1. Building a document:
            document = CSVDocument(declaration, BaseCSVTable(["x", "density"]))
            document.table.add_row([0.1, 0.0])

        2. Marking it partial:
            document.mark_partial()
    """

    def __init__(self, declaration: ProvenanceDeclaration, table: BaseCSVTable | None = None) -> None:
        self.declaration: ProvenanceDeclaration = declaration
        self.table: BaseCSVTable | None = table
        self._head: GroupedBaseArtifact = GroupedBaseArtifact(comments_only=True)
        self.partial: bool = False

    def add_to_head(self, line: SafeCommentLine) -> None:
        """
        Append a comment line after the provenance block.

        :raises ValueError: If ``line`` is not a ``#`` comment.
        """
        self._head.append(line)

    def mark_partial(self) -> None:
        """Flags the document as written from an interrupted run."""
        self.partial = True

    @property
    def _document_level_artifacts(self) -> list[GeneralBaseArtifact]:
        artifacts: list[GeneralBaseArtifact] = [self.declaration]
        if self.partial:
            artifacts.append(SafeCommentLine(PARTIAL_MARKER))
        artifacts.append(self._head)
        if self.table is not None:
            artifacts.append(self.table)
        return artifacts

    def to_string(self) -> str:
        document_str: str = ""
        for artifact in self._document_level_artifacts:
            document_str += str(artifact)
        return document_str
