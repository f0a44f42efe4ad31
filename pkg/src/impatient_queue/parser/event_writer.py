"""
Newline-delimited JSON event logs.
"""

import json
import logging
from pathlib import Path
from typing import Iterable, Iterator, Optional

from impatient_queue.models.task import EventRecord


class EventLogWriter:
    """Writes simulator event records to NDJSON, one record per line."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)

    def write(self, events: Iterable[EventRecord], output_path: Path) -> Path:
        """
        Write event records in simulation order.

        Args:
            events: Records as produced by the simulator
            output_path: Path for the NDJSON file

        Returns:
            The path written

        """
        output_path = Path(output_path)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        count = 0
        with open(output_path, "w") as f:
            for event in events:
                f.write(json.dumps(event.model_dump(mode="json")) + "\n")
                count += 1
        self.logger.info(f"Wrote {count} events to {output_path}")
        return output_path

    def read(self, input_path: Path) -> Iterator[EventRecord]:
        with open(input_path) as f:
            for line in f:
                if line.strip():
                    yield EventRecord.model_validate_json(line)
