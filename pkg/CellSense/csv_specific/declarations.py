import hashlib

from .base import CommentLine
from ..general_base import GroupedBaseArtifact


def config_hash(resolved_config: str) -> str:
    """SHA-256 of the resolved configuration text, prefixed with the algorithm name."""
    return "sha256:" + hashlib.sha256(resolved_config.encode("utf-8")).hexdigest()


class ProvenanceDeclaration(GroupedBaseArtifact):
    """
    The comment block opening every CSV artifact.

    CSV Use Cases:
        Records how the file was produced so a run can be reproduced from the file alone:
        experiment kind, master seed and the hash of the resolved configuration.

    Examples:
        1. Creating the declaration of a table1 run:
            declaration = ProvenanceDeclaration(kind="table1", seed=7, resolved_config=text)
            rendered = render(declaration)
    """
    def __init__(self, kind: str, seed: int, resolved_config: str, **extra: any) -> None:
        """
        :param kind: Experiment kind.
        :param seed: Master seed of the run.
        :param resolved_config: The resolved configuration text that is hashed.
        :param extra: Additional ``# key = value`` lines, written in keyword order.
        """
        self.kind: str = kind
        self.seed: int = seed
        self.hash: str = config_hash(resolved_config)
        lines: list[CommentLine] = [
            CommentLine("kind", kind),
            CommentLine("seed", seed),
            CommentLine("config_hash", self.hash),
        ]
        lines.extend(CommentLine(key, value) for key, value in extra.items())
        super().__init__(lines, comments_only=True)
