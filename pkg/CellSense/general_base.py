from abc import (ABC, abstractmethod)
from typing import Iterable, Iterator

COMMENT_PREFIX: str = "#"


def renders_as_comment(artifact: "GeneralBaseArtifact | str") -> bool:
    """True when every line ``artifact`` renders is a ``#`` comment, i.e. invisible to CSV readers."""
    return all(line.startswith(COMMENT_PREFIX) for line in str(artifact).splitlines())


class GeneralBaseArtifact(ABC):
    """
    Anything that renders to whole lines of a CSV artifact.

    Subclasses produce text whose every line ends with ``\\n``: a comment line, a block of
    comments, a table with its header row.
    """

    def __str__(self) -> str:
        return self.to_string()

    @abstractmethod
    def to_string(self) -> str:
        """
        Generate the lines of the artifact, each terminated by ``\\n``.

        Example:
            A comment renders as "# seed = 1\\n", a table as "x,density\\n0.5,0.25\\n".
        """

    def lines(self) -> list[str]:
        return self.to_string().splitlines()

    @property
    def is_comment(self) -> bool:
        return renders_as_comment(self)


class GroupedBaseArtifact(GeneralBaseArtifact):
    def __init__(self, artifacts: Iterable["GeneralBaseArtifact | str"] = (), comments_only: bool = False) -> None:
        """
        An ordered run of artifacts, or raw strings, rendered back to back.

        CSV Use Case:
            The comment block heading every artifact is a group with ``comments_only`` set, so a
            data line can never slip in ahead of the header row.

        Example:
            head = GroupedBaseArtifact([CommentLine("seed", 7)], comments_only=True)
            head.append(CommentLine("atom_at_zero", 0.5))

        :param artifacts: Members, in output order.
        :param comments_only: Accept only members made entirely of ``#`` lines.
        :raises ValueError: If ``comments_only`` is set and a member renders a data line.
        """
        self.comments_only: bool = comments_only
        self.artifacts: list[GeneralBaseArtifact | str] = []
        for artifact in artifacts:
            self.append(artifact)

    def append(self, artifact: "GeneralBaseArtifact | str") -> None:
        if self.comments_only and not renders_as_comment(artifact):
            raise ValueError(f"only '#' comment lines are allowed in this block, got {str(artifact)!r}")
        self.artifacts.append(artifact)

    def __iter__(self) -> Iterator["GeneralBaseArtifact | str"]:
        return iter(self.artifacts)

    def __len__(self) -> int:
        return len(self.artifacts)

    def to_string(self) -> str:
        return "".join(map(str, self.artifacts))
