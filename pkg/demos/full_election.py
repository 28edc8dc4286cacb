#!/usr/bin/env python3
"""A complete election through the simulated network, twice.

Runs the whole pipeline (registration, matrix distribution, commitments,
opening with retries, per-bit Byzantine agreement, tally, audit), prints a
summary plus a transcript excerpt, verifies the rerun is byte-identical,
and ends with a dishonest miner getting caught during BUS verification.
"""
import json

from qvote.election import ElectionAdversary, ElectionConfig, run_election

config = ElectionConfig(voters=4, votes=(1, 0, 1, 1), n=16, m=3,
                        copies=30, lam=0.9, seed=42)
result = run_election(config)

print(f"outcome: {result.outcome}")
print(f"votes:   {''.join(map(str, result.votes))}  (true yes-count {result.true_yes_count})")
print(f"masked:  {list(result.masked_values)}")
print(f"tally:   {result.tally}")
print(f"retries: {result.retries or 'none'}")
print("decoded ballots per miner:")
for miner, view in result.decoded.items():
    print(f"  {miner}: {view}")
print(f"audit:   {sum(1 for f in result.audit_flags if f['verdict'] == 'honest')}"
      f"/{len(result.audit_flags)} pairs honest")

lines = result.transcript_jsonl.strip().splitlines()
print(f"\ntranscript: {len(lines)} entries; a middle slice:")
for line in lines[60:66]:
    entry = json.loads(line)
    print(f"  seq {entry['seq']:4d}  {entry['from']:>4} -> {entry['to']:<4}"
          f" [{entry['channel']}] {entry['type']}")

again = run_election(config)
print(f"\nrerun with the same config+seed is byte-identical: "
      f"{again.to_json() == result.to_json() and again.transcript_jsonl == result.transcript_jsonl}")

probe_config = ElectionConfig(voters=2, votes=(1, 0), n=8, m=3, copies=10,
                              lam=0.9, seed=0,
                              adversary=ElectionAdversary(kind="probe", miner=1))
probe_result = run_election(probe_config)
print(f"\nwith miner 1 shipping a known-state probe: outcome = {probe_result.outcome}")
for event in probe_result.events:
    print(f"  event: {event}")
