"""Shared fixtures: scripted git repositories and commit record builders."""

import os
import shutil
import subprocess
from collections.abc import Callable
from pathlib import Path

import pytest

from crim import CommitRecord, FileChange

BASE_TIMESTAMP = 1_700_000_000
FIXTURES_DIR = Path(__file__).parent / "fixtures"


class ScriptedRepo:
    """A git repository driven through the git CLI with fixed identities and dates."""

    def __init__(self, path: Path) -> None:
        """Initialize an empty repository on branch ``main``.

        Args:
            path: Directory to create the repository in.
        """
        self.path = path
        self.path.mkdir(parents=True, exist_ok=True)
        self.git("init", "-q")
        self.git("symbolic-ref", "HEAD", "refs/heads/main")
        self.git("config", "commit.gpgsign", "false")
        self.git("config", "user.name", "Fixture Bot")
        self.git("config", "user.email", "bot@example.com")

    def git(self, *args: str, env: dict[str, str] | None = None) -> str:
        """Run a git command inside the repository and return its stdout."""
        full_env = {
            **os.environ,
            "HOME": str(self.path),
            "GIT_CONFIG_NOSYSTEM": "1",
            "GIT_TERMINAL_PROMPT": "0",
            **(env or {}),
        }
        result = subprocess.run(
            ["git", *args],
            cwd=self.path,
            env=full_env,
            check=True,
            capture_output=True,
            text=True,
        )
        return result.stdout

    def write(self, relative_path: str, content: str | bytes) -> None:
        """Write a file in the working tree."""
        target = self.path / relative_path
        target.parent.mkdir(parents=True, exist_ok=True)
        if isinstance(content, bytes):
            target.write_bytes(content)
        else:
            target.write_text(content, encoding="utf-8")

    def remove(self, relative_path: str) -> None:
        """Delete a file from the working tree."""
        (self.path / relative_path).unlink()

    def _identity_env(self, name: str, email: str, timestamp: int) -> dict[str, str]:
        date = f"{timestamp} +0000"
        return {
            "GIT_AUTHOR_NAME": name,
            "GIT_AUTHOR_EMAIL": email,
            "GIT_AUTHOR_DATE": date,
            "GIT_COMMITTER_NAME": name,
            "GIT_COMMITTER_EMAIL": email,
            "GIT_COMMITTER_DATE": date,
        }

    def commit(self, message: str, timestamp: int, name: str = "Alice", email: str = "alice@example.com") -> str:
        """Stage everything and commit with a fixed author and date.

        Returns:
            The new commit hash.
        """
        self.git("add", "-A")
        self.git("commit", "-q", "--allow-empty", "-m", message, env=self._identity_env(name, email, timestamp))
        return self.git("rev-parse", "HEAD").strip()

    def merge(self, branch: str, timestamp: int, name: str = "Alice", email: str = "alice@example.com") -> str:
        """Merge ``branch`` into the current branch with a merge commit.

        Returns:
            The merge commit hash.
        """
        env = self._identity_env(name, email, timestamp)
        self.git("merge", "-q", "--no-ff", "-m", f"Merge {branch}", branch, env=env)
        return self.git("rev-parse", "HEAD").strip()


@pytest.fixture
def scripted_repo(tmp_path: Path) -> ScriptedRepo:
    """Provide an empty scripted repository, skipping when git is unavailable."""
    if shutil.which("git") is None:
        pytest.skip("git executable not available")
    return ScriptedRepo(tmp_path / "repo")


@pytest.fixture
def linear_repo(scripted_repo: ScriptedRepo) -> ScriptedRepo:
    """Two authors, five commits, all on ``main``.

    Alice works in sessions of 30 and 20 minutes, then returns after two days.
    Bob commits twice an hour apart.
    """
    repo = scripted_repo
    repo.write("app.py", "def main():\n    return 1\n")
    repo.commit("Add app", BASE_TIMESTAMP)

    repo.write("app.py", "def main():\n    if ready():\n        return 1\n    return 0\n")
    repo.commit("Add readiness check", BASE_TIMESTAMP + 1800)

    repo.write("README.md", "# App\n\nRun it with care.\n")
    repo.commit("Document app", BASE_TIMESTAMP + 600, name="Bob", email="bob@example.com")

    repo.write("README.md", "# App\n\nRun it with great care and patience.\n")
    repo.commit("Expand docs", BASE_TIMESTAMP + 4200, name="Bob", email="bob@example.com")

    repo.write("app.py", "def main():\n    if ready() and safe():\n        return 1\n    return 0\n")
    repo.commit("Check safety", BASE_TIMESTAMP + 3000)

    repo.write("app.py", "def main():\n    while not ready():\n        wait()\n    return 1\n")
    repo.commit("Wait until ready", BASE_TIMESTAMP + 3000 + 2 * 86400)
    return repo


@pytest.fixture
def merge_repo(scripted_repo: ScriptedRepo) -> ScriptedRepo:
    """Three commits, one of which is a merge of a feature branch."""
    repo = scripted_repo
    repo.write("base.txt", "base\n")
    repo.commit("Base", BASE_TIMESTAMP)

    repo.git("checkout", "-q", "-b", "feature")
    repo.write("feature.txt", "feature work\n")
    repo.commit("Feature", BASE_TIMESTAMP + 600)

    repo.git("checkout", "-q", "main")
    repo.merge("feature", BASE_TIMESTAMP + 1200)
    return repo


@pytest.fixture
def make_record() -> Callable[..., CommitRecord]:
    """Build commit records with a resolved author and one text file by default."""

    def factory(
        commit_id: str,
        timestamp: int,
        author: str = "a@x",
        before: str | None = None,
        after: str | None = "",
        path: str = "notes.txt",
        is_merge: bool = False,
    ) -> CommitRecord:
        files = () if is_merge else (FileChange(path, before, after),)
        return CommitRecord(
            commit_id=commit_id,
            author_name=author.split("@")[0],
            author_email=author,
            timestamp=timestamp,
            is_merge=is_merge,
            files=files,
            author_id=author,
        )

    return factory
