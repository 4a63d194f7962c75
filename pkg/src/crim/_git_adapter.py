"""Git history reader that turns a live repository into commit records."""

import logging
from collections.abc import Iterator
from pathlib import Path
from types import ModuleType

from ._constants import (
    BINARY_SNIFF_BYTES,
    GIT_FIELD_SEPARATOR,
    GIT_LOG_FORMAT,
    GIT_RECORD_SEPARATOR,
    GIT_SUBMODULE_MODE,
)
from ._errors import GitCommandFailed, InputError, ToolEnvironmentError
from ._ingest import order_commits
from ._models import CommitRecord, FileChange

logger = logging.getLogger(__name__)


def _decode_blob(data: bytes) -> str | None:
    """Decode blob bytes as UTF-8 text, or return None for binary content.

    Args:
        data: Raw blob content.

    Returns:
        Decoded text with invalid sequences replaced, or None when a NUL byte
        appears in the sniffed prefix.
    """
    if b"\x00" in data[:BINARY_SNIFF_BYTES]:
        return None
    return data.decode("utf-8", errors="replace")


def _import_git() -> ModuleType:
    """Import GitPython on first use; its import fails when git is not on the search path.

    Returns:
        The ``git`` package.

    Raises:
        ToolEnvironmentError: If GitPython is missing or git is not on the search path.
    """
    try:
        import git
    except ModuleNotFoundError as e:
        raise ToolEnvironmentError(f"GitPython is not installed: {e}") from e
    except ImportError as e:
        raise ToolEnvironmentError(f"git executable not found on the search path: {e}") from e
    return git


class GitHistoryReader:
    """Reads commits and file contents from a git repository through the git CLI.

    Commits are enumerated with ``git log``, changed paths with
    ``git diff-tree`` against the first parent, and contents with
    ``git show <rev>:<path>``.
    """

    def __init__(self, repo_path: str | Path) -> None:
        """Open the repository.

        Args:
            repo_path: Path to the repository working tree or bare directory.

        Raises:
            ToolEnvironmentError: If git is not available.
            InputError: If the path does not exist or is not a git repository.
        """
        git = _import_git()
        self._errors = git.exc
        self.repo_path = Path(repo_path)
        try:
            self._repo = git.Repo(self.repo_path)
        except git.exc.NoSuchPathError as e:
            raise InputError(f"repository path does not exist: {repo_path}") from e
        except git.exc.InvalidGitRepositoryError as e:
            raise InputError(f"not a git repository: {repo_path}") from e

    def _run(self, *args: str, binary: bool = False) -> str | bytes:
        """Run a git subcommand and return its standard output.

        Args:
            *args: Subcommand and arguments, without the leading ``git``.
            binary: Return raw bytes instead of decoded text.

        Returns:
            The command's standard output, unstripped.

        Raises:
            ToolEnvironmentError: If the git executable cannot be found.
            GitCommandFailed: If git exits with a nonzero status.
        """
        try:
            return self._repo.git.execute(
                ["git", *args],
                stdout_as_string=not binary,
                strip_newline_in_stdout=False,
            )
        except self._errors.GitCommandNotFound as e:
            raise ToolEnvironmentError("git executable not found on the search path") from e
        except self._errors.GitCommandError as e:
            stderr = str(e.stderr).strip() or "no stderr output"
            raise GitCommandFailed(f"git {args[0]} exited with status {e.status}: {stderr}") from e

    def _read_blob(self, revision: str, path: str) -> bytes:
        """Return the raw content of ``path`` at ``revision``."""
        data = self._run("show", f"{revision}:{path}", binary=True)
        return data if isinstance(data, bytes) else data.encode("utf-8")

    def _file_changes(self, commit: str, parent: str | None) -> tuple[FileChange, ...]:
        """List the file changes a commit makes relative to its first parent.

        Args:
            commit: Commit hash.
            parent: First parent hash, or None for a root commit.

        Returns:
            File changes in git's path order; submodule entries are skipped.
        """
        args = ["diff-tree", "-r", "-z", "--raw", "--no-renames", "--no-commit-id"]
        args += [parent, commit] if parent else ["--root", commit]
        tokens = str(self._run(*args)).split(GIT_FIELD_SEPARATOR)

        changes: list[FileChange] = []
        position = 0
        while position + 1 < len(tokens):
            meta, path = tokens[position], tokens[position + 1]
            position += 2
            old_mode, new_mode, _old_sha, _new_sha, status = meta.lstrip(":").split()
            if GIT_SUBMODULE_MODE in (old_mode, new_mode):
                logger.debug("skipping submodule entry %s in %s", path, commit)
                continue

            before_raw = None if status == "A" or parent is None else self._read_blob(parent, path)
            after_raw = None if status == "D" else self._read_blob(commit, path)
            before = None if before_raw is None else _decode_blob(before_raw)
            after = None if after_raw is None else _decode_blob(after_raw)

            if (before_raw is not None and before is None) or (after_raw is not None and after is None):
                changes.append(FileChange(path=path, before_content=None, after_content=None, is_binary=True))
            else:
                changes.append(FileChange(path=path, before_content=before, after_content=after))
        return tuple(changes)

    def iter_commits(self, since: int | None = None, until: int | None = None) -> Iterator[CommitRecord]:
        """Yield commit records reachable from HEAD, newest first.

        Args:
            since: Inclusive lower bound on the author timestamp.
            until: Inclusive upper bound on the author timestamp.

        Yields:
            One record per commit; merges carry ``is_merge=True`` and no files.
        """
        if not self._repo.head.is_valid():
            logger.warning("repository %s has no commits", self.repo_path)
            return

        output = str(self._run("log", "--date=unix", f"--pretty=format:{GIT_LOG_FORMAT}", "HEAD"))
        for chunk in output.split(GIT_RECORD_SEPARATOR):
            chunk = chunk.strip("\n")
            if not chunk:
                continue
            commit, parents_field, name, email, timestamp_field = chunk.split(GIT_FIELD_SEPARATOR)
            timestamp = int(timestamp_field)
            if (since is not None and timestamp < since) or (until is not None and timestamp > until):
                continue

            parents = parents_field.split()
            is_merge = len(parents) > 1
            files = () if is_merge else self._file_changes(commit, parents[0] if parents else None)
            logger.debug("read commit %s (%d files, merge=%s)", commit, len(files), is_merge)
            yield CommitRecord(
                commit_id=commit,
                author_name=name,
                author_email=email,
                timestamp=timestamp,
                is_merge=is_merge,
                files=files,
            )


def collect_from_git(repo_path: str | Path, since: int | None = None, until: int | None = None) -> list[CommitRecord]:
    """Collect commit records from a git repository.

    Args:
        repo_path: Path to the repository.
        since: Inclusive lower bound on the author timestamp.
        until: Inclusive upper bound on the author timestamp.

    Returns:
        Records ordered by (timestamp, commit id).

    Raises:
        InputError: If the repository cannot be opened.
        ToolEnvironmentError: If git is not installed.
        GitCommandFailed: If a git subprocess fails.
    """
    records = order_commits(GitHistoryReader(repo_path).iter_commits(since, until))
    logger.info("collected %d commits from %s", len(records), repo_path)
    return records
