"""Runtime configuration shared by the command line and verification sessions."""
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Optional

from ..divisors.pairing import DEFAULT_N_CEILING
from ..errors import InvalidArgumentError

CACHE_ENV_VAR = "MZN_CACHE_DIR"
DEFAULT_CACHE_DIR = Path("~/.local/share/mzn-verify")
OUTPUT_FORMATS = ("plain", "json", "csv")


def _given(args, name: str, default):
    """The parsed value of `name`, or `default` when the flag was not given (0 is a value)."""
    value = getattr(args, name, None)
    return default if value is None else value


@dataclass(frozen=True)
class Config:
    """
    Settings for one run.

    Args:
        cache_dir: Directory for pairing-matrix cache files
        n_ceiling: Largest n for pairing-matrix work
        threads: Worker threads for matrix builds and verifier batches
        output_format: plain, json or csv
        use_cache: Whether the disk cache is read and written
    """
    cache_dir: Path = field(default_factory=lambda: DEFAULT_CACHE_DIR.expanduser())
    n_ceiling: int = DEFAULT_N_CEILING
    threads: int = 1
    output_format: str = "plain"
    use_cache: bool = True

    def __post_init__(self):
        object.__setattr__(self, "cache_dir", Path(self.cache_dir).expanduser())
        if self.n_ceiling < 4:
            raise InvalidArgumentError(f"n ceiling must be >= 4, got {self.n_ceiling}")
        if self.threads < 1:
            raise InvalidArgumentError(f"Thread count must be >= 1, got {self.threads}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InvalidArgumentError(f"Output format must be one of {OUTPUT_FORMATS}, got {self.output_format!r}")

    @classmethod
    def from_args(cls, args, environ: Optional[Mapping[str, str]] = None) -> "Config":
        """
        Build from parsed command-line arguments; MZN_CACHE_DIR wins over --cache-dir.

        Args:
            args: argparse namespace (missing attributes take defaults)
            environ: Environment mapping (defaults to os.environ)
        """
        environ = os.environ if environ is None else environ
        cache_dir = environ.get(CACHE_ENV_VAR) or getattr(args, "cache_dir", None) or DEFAULT_CACHE_DIR
        return cls(
            cache_dir=Path(cache_dir),
            n_ceiling=_given(args, "n_ceiling", DEFAULT_N_CEILING),
            threads=_given(args, "threads", 1),
            output_format=_given(args, "format", "plain"),
            use_cache=not getattr(args, "no_cache", False),
        )

    def check_cache_writable(self) -> None:
        """Create the cache directory if needed and make sure files can be written there."""
        if not self.use_cache:
            return
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise InvalidArgumentError(f"Cache directory {self.cache_dir} is not usable: {exc}")
        if not os.access(self.cache_dir, os.W_OK):
            raise InvalidArgumentError(f"Cache directory {self.cache_dir} is not writable")
