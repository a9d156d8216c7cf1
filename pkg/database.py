"""Benchmark history stored in SQLite."""
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Dict, List

import aiosqlite

logger = logging.getLogger(__name__)


class BenchDatabase:
    def __init__(self, db_path: str):
        self.db_path = db_path
        parent = Path(db_path).parent
        parent.mkdir(parents=True, exist_ok=True)

    async def init_db(self):
        """Create the runs and results tables."""
        async with aiosqlite.connect(self.db_path) as db:
            await db.execute('''
                CREATE TABLE IF NOT EXISTS runs (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    started_at TIMESTAMP DEFAULT CURRENT_TIMESTAMP,
                    suite TEXT NOT NULL,          -- JSON suite parameters
                    instances INTEGER NOT NULL,
                    agreement BOOLEAN NOT NULL
                )
            ''')

            await db.execute('''
                CREATE TABLE IF NOT EXISTS results (
                    id INTEGER PRIMARY KEY AUTOINCREMENT,
                    run_id INTEGER NOT NULL,
                    solver TEXT NOT NULL,
                    positive INTEGER NOT NULL,
                    negative INTEGER NOT NULL,
                    skipped INTEGER NOT NULL,
                    total_seconds REAL NOT NULL,
                    FOREIGN KEY (run_id) REFERENCES runs (id)
                )
            ''')

            await db.execute('''
                CREATE INDEX IF NOT EXISTS idx_results_run ON results(run_id)
            ''')

            await db.commit()

    async def record_run(self, suite: Dict, instances: int, agreement: bool, rows: List[Dict]) -> int:
        """Store one bench run with its per-solver rows; returns the run id."""
        async with aiosqlite.connect(self.db_path) as db:
            cursor = await db.execute('''
                INSERT INTO runs (started_at, suite, instances, agreement)
                VALUES (?, ?, ?, ?)
            ''', (datetime.now().isoformat(timespec='seconds'), json.dumps(suite, sort_keys=True), instances, agreement))
            run_id = cursor.lastrowid or 0
            await db.executemany('''
                INSERT INTO results (run_id, solver, positive, negative, skipped, total_seconds)
                VALUES (?, ?, ?, ?, ?, ?)
            ''', [
                (run_id, row['solver'], row['positive'], row['negative'], row['skipped'], row['total_seconds'])
                for row in rows
            ])
            await db.commit()
        logger.info(f"💾 Bench run {run_id} saved to {self.db_path}")
        return run_id

    async def recent_runs(self, limit: int = 20) -> List[Dict]:
        """Most recent runs first, each with its solver rows."""
        async with aiosqlite.connect(self.db_path) as db:
            db.row_factory = aiosqlite.Row
            cursor = await db.execute('''
                SELECT id, started_at, suite, instances, agreement
                FROM runs ORDER BY id DESC LIMIT ?
            ''', (limit,))
            runs = [dict(row) for row in await cursor.fetchall()]
            for run in runs:
                run['suite'] = json.loads(run['suite'])
                run['agreement'] = bool(run['agreement'])
                cursor = await db.execute('''
                    SELECT solver, positive, negative, skipped, total_seconds
                    FROM results WHERE run_id = ? ORDER BY id
                ''', (run['id'],))
                run['results'] = [dict(row) for row in await cursor.fetchall()]
        return runs
