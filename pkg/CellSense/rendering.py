import logging
import os.path

from .general_base import (GeneralBaseArtifact, GroupedBaseArtifact)

logger = logging.getLogger(__name__)


def render(
        content: str | GeneralBaseArtifact | list[str | GeneralBaseArtifact] | tuple[str | GeneralBaseArtifact]
) -> str:
    """
    Render artifact content as a single string.

    Use Cases:
        1. Converting a single artifact (a CSV table, a whole CSV document) to text.
        2. Joining several artifacts or plain strings into one output.

    Examples:
        1. Single artifact:
            rendered = render(CSVDocument(...))

        2. Mixed content:
            rendered = render([CommentLine("partial"), table])

    :param content: A string, an artifact, or a list/tuple of strings and artifacts.
    :return: The rendered content.
    """
    if isinstance(content, (str, GeneralBaseArtifact)):
        content = [content]
    return str(GroupedBaseArtifact(artifacts=content))


def save_to_file(text: str, file_path: any) -> None:
    """
    Save rendered text to a file, creating parent directories as needed.

    The file is written with ``\\n`` line endings whatever the platform, so the same experiment
    produces byte-identical files everywhere.

    :param text: The rendered content.
    :param file_path: Destination path.
    :return: None
    """
    directory = os.path.dirname(file_path)
    if directory and not os.path.exists(directory):
        os.makedirs(directory)

    with open(file_path, 'w', encoding='utf-8', newline='') as file:
        file.write(text)
    logger.info("wrote %s (%d bytes)", file_path, len(text.encode("utf-8")))
