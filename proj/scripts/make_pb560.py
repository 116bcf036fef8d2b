#!/usr/bin/env python3
"""Regenerates data/pb560.json.

Per-task durations are synthetic: the published case reports only the
aggregates (803 s total work content, 321 s robot-allocated, 482 s manual,
takt 161 s, 5 stations). The constants below are constructed so that those
aggregates hold exactly and a 5-station, takt-161, resource-pure balance
exists. The same constraints are asserted here and in the C++ test suite.
"""
import json
import pathlib

# id: (name, duration_s, predecessors, failed_criteria, category)
TASKS = {
    1:  ("Place chassis on assembly fixture",      30, [],        [],                                      "pick_place"),
    2:  ("Install blower sub-assembly",            55, [8],       ["mounting"],                            "assembly"),
    3:  ("Fit base frame brackets",                25, [1],       [],                                      "assembly"),
    4:  ("Seat main PCB on standoffs",             48, [2],       ["mounting"],                            "assembly"),
    5:  ("Drive chassis screws, left side",        28, [3],       [],                                      "screw_driving"),
    6:  ("Drive chassis screws, right side",       27, [3],       [],                                      "screw_driving"),
    7:  ("Mount valve manifold block",             24, [5, 6],    [],                                      "assembly"),
    8:  ("Attach inlet filter housing",            26, [7],       [],                                      "assembly"),
    9:  ("Fasten PCB retention screws",            25, [13],      [],                                      "screw_driving"),
    10: ("Route flow sensor tubing",               58, [4],       ["part", "feeding", "mounting"],         "assembly"),
    11: ("Connect wiring harness to PCB",          52, [10],      ["part", "feeding", "mounting"],         "assembly"),
    12: ("Dress and clip harness loom",            57, [11],      ["part", "feeding", "mounting"],         "assembly"),
    13: ("Install oxygen blender valve",           52, [12],      ["part", "feeding", "mounting", "safety"], "assembly"),
    14: ("Place battery pack in bay",              27, [9],       [],                                      "pick_place"),
    15: ("Drive battery bracket screws",           29, [14],      [],                                      "screw_driving"),
    16: ("Fit front panel and display",            78, [20],      ["mounting"],                            "assembly"),
    17: ("Attach rear cover plate",                26, [14],      [],                                      "assembly"),
    18: ("Install top enclosure shell",            82, [16],      ["mounting"],                            "assembly"),
    19: ("Apply unit label and seals",             28, [15, 17],  [],                                      "assembly"),
    20: ("Run pneumatic leak test",                26, [19],      [],                                      "quality_test"),
}

CRITERIA = ["part", "feeding", "joining", "mounting", "safety"]


def build():
    tasks = []
    for tid in sorted(TASKS):
        name, dur, preds, fails, cat = TASKS[tid]
        tasks.append({
            "id": tid,
            "name": name,
            "duration_s": dur,
            "predecessors": sorted(preds),
            "criteria": {c: c not in fails for c in CRITERIA},
            "category": cat,
        })
    return {
        "format": 1,
        "product": {"name": "PB560", "tasks": tasks},
        "resources": [
            {"kind": "Human", "payload_kg": 25, "reach_mm": 800, "max_speed_mm_s": 1600},
            {"kind": "Humanoid", "payload_kg": 10, "reach_mm": 1000,
             "max_speed_mm_s": 2222, "charge_interval_s": 7200, "charge_duration_s": 900},
        ],
        "shift": {"duration_s": 27000, "demand_units": 167},
    }


def check(ds):
    tasks = ds["product"]["tasks"]
    assert len(tasks) == 20
    robot = [t for t in tasks if all(t["criteria"].values())]
    human = [t for t in tasks if not all(t["criteria"].values())]
    assert sum(t["duration_s"] for t in tasks) == 803
    assert sum(t["duration_s"] for t in robot) == 321 and len(robot) == 12
    assert sum(t["duration_s"] for t in human) == 482 and len(human) == 8
    # the intended 5-station takt-161 balance
    stations = [([1, 3, 5, 6, 7, 8], 160), ([2, 4, 10], 161), ([11, 12, 13], 161),
                ([9, 14, 15, 17, 19, 20], 161), ([16, 18], 160)]
    dur = {t["id"]: t["duration_s"] for t in tasks}
    assert all(sum(dur[i] for i in ids) == load for ids, load in stations)
    # precedence respects the station order
    station_of = {i: k for k, (ids, _) in enumerate(stations) for i in ids}
    for t in tasks:
        assert all(station_of[p] <= station_of[t["id"]] for p in t["predecessors"])


def main():
    ds = build()
    check(ds)
    out = pathlib.Path(__file__).resolve().parent.parent / "data" / "pb560.json"
    out.parent.mkdir(exist_ok=True)
    out.write_text(json.dumps(ds, indent=2) + "\n")
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
