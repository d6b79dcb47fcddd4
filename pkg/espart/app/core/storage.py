import json
from typing import Dict, List, Optional
from datetime import datetime
from pathlib import Path
import threading


class JSONStorage:
    """Run reports kept in a single JSON document."""

    def __init__(self, file_path: str = "db/runs.json"):
        self.file_path = file_path
        self._lock = threading.Lock()
        self.ensure_file_exists()

    def ensure_file_exists(self):
        """Ensure the storage file exists."""
        path = Path(self.file_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        if not path.exists():
            with open(self.file_path, 'w') as f:
                json.dump({"runs": []}, f)

    def _read(self) -> Dict:
        """Read the current state from file."""
        with open(self.file_path, 'r') as f:
            return json.load(f)

    def _write(self, data: Dict) -> None:
        """Write the current state to file."""
        with open(self.file_path, 'w') as f:
            json.dump(data, f, indent=2, default=str)

    def create_run(self, run_data: Dict) -> Dict:
        """Store a run report and return it with its id."""
        with self._lock:
            data = self._read()
            new_id = max((run["id"] for run in data["runs"]), default=0) + 1
            run = {
                "id": new_id,
                **run_data,
                "created_at": datetime.now().isoformat(),
            }
            data["runs"].append(run)
            self._write(data)
        return run

    def get_run(self, run_id: int) -> Optional[Dict]:
        data = self._read()
        for run in data["runs"]:
            if run["id"] == run_id:
                return run
        return None

    def list_runs(self, skip: int = 0, limit: int = 10, command: Optional[str] = None) -> List[Dict]:
        """List runs with pagination, optionally for one command."""
        runs = self._read()["runs"]
        if command is not None:
            runs = [run for run in runs if run["command"] == command]
        return runs[skip:skip + limit]

    def clear(self) -> None:
        with self._lock:
            self._write({"runs": []})
