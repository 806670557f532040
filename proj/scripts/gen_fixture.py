#!/usr/bin/env python3
"""Generate the synthetic NDJSON fixture used by the golden-pipeline test.

The fixture covers three scenario repetitions (S0 rep 1, S0 rep 2, S9 rep 1)
with a control and a personalised feed each, so every report in the analysis
battery has data: the S0 feeds feed the heatmap and the noise baseline, the
S9 pair populates the activity tables. Records include ads and livestreams
(which the analysis must drop), mixed-case and punctuated hashtags, and
stoplisted generic tags.

Usage: scripts/gen_fixture.py [out_path]
"""

import json
import random
import sys

ORGANIC_PER_FEED = 120
ADS_PER_FEED = 8
LIVES_PER_FEED = 2

TAG_POOL = [
    "cat", "Cat", "catsoftiktok", "dog", "puppy", "minecraft", "GTA6", "gaming",
    "cooking", "foodie", "Movie", "comedy", "lol", "travel", "music", "dance",
    "news", "sports", "diy", "fashion", "t0w1", "t3w2", "t7w4", "x99",
    "fyp", "ForYou", "viral", "trending", "fy", "cute#cat", "no-tag!",
]

REGIONS = ["US", "DE", "FR", "RO", "UA"]


def make_feed(rng, scenario_id, repetition, role):
    bot_id = f"{scenario_id}-{role}-r{repetition}"
    kinds = ["organic"] * ORGANIC_PER_FEED + ["ad"] * ADS_PER_FEED + ["live"] * LIVES_PER_FEED
    rng.shuffle(kinds)
    records = []
    position = 0
    for kind in kinds:
        duration = rng.randint(5, 60)
        quarters = rng.choice([1, 2, 3, 4])
        watched_s = duration * quarters / 4.0
        n_tags = rng.randint(1, 5)
        video = {
            "id": f"v{rng.randrange(100000):05d}",
            "creator": f"c{rng.randrange(200):03d}",
            "hashtags": [rng.choice(TAG_POOL) for _ in range(n_tags)],
            "duration_s": float(duration),
            "play_count": int(50 * (1.0 - rng.random()) ** -0.9),
            "like_count": rng.randint(0, 5000),
            "comment_count": rng.randint(0, 500),
            "share_count": rng.randint(0, 200),
            "is_ad": kind == "ad",
            "is_live": kind == "live",
            "region": rng.choice(REGIONS),
        }
        records.append({
            "scenario_id": scenario_id,
            "repetition": repetition,
            "bot_id": bot_id,
            "role": role,
            "run_index": 0,
            "position": position,
            "video": video,
            "watched_s": watched_s,
            "watched_pct": watched_s / duration * 100.0,
            "liked": role == "personalised" and rng.random() < 0.1,
            "followed": False,
            "ts_ms": 1735689600000 + repetition * 864000000 + position * 30000,
        })
        position += 1
    return records


def main():
    out_path = sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture.ndjson"
    rng = random.Random(20250101)
    records = []
    for scenario_id, repetition in [("S0", 1), ("S0", 2), ("S9", 1)]:
        for role in ["control", "personalised"]:
            records.extend(make_feed(rng, scenario_id, repetition, role))
    with open(out_path, "w") as f:
        for r in records:
            f.write(json.dumps(r, separators=(",", ":")) + "\n")
    print(f"wrote {len(records)} records to {out_path}")


if __name__ == "__main__":
    main()
