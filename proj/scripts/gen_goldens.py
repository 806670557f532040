#!/usr/bin/env python3
"""Independent golden generator for the analysis battery.

Re-implements the documented report definitions directly from the NDJSON
fixture, including the compensated-summation order, so the emitted CSVs are
byte-comparable with the `analyze` output. Keep this script free of any
shared code with the C++ implementation: it is the oracle.

Usage: scripts/gen_goldens.py [fixture] [out_dir] [window] [bucket]
"""

import json
import os
import sys

STOPLIST = {"fyp", "foryou", "foryoupage", "viral", "trending", "fy"}

INTERESTS = [
    "movie", "film", "marvel", "foodtiktok", "tiktokfood", "foodie", "cooking",
    "food", "gaming", "gta6", "gta", "minecraft", "roblox", "cat", "dog", "pet",
    "dogsoftiktok", "catsoftiktok", "cute", "puppy", "dogs", "cats", "animals",
    "petsoftiktok", "kitten", "comedy", "lol", "humour", "laugh", "fun", "jokes",
    "love", "couple", "relationships",
]

TABLE2_GROUPS = [
    ("random_explicit", ["S12", "S15", "S16"]),
    ("predefined_explicit", ["S13", "S14"]),
    ("random_implicit", ["S5", "S6", "S7", "S8"]),
    ("predefined_implicit", ["S9", "S10", "S11"]),
]

TABLE3_GROUPS = [
    ("follow", ["S15", "S16"]),
    ("random_like", ["S12"]),
    ("predefined_like", ["S13", "S14"]),
    ("random_watch", ["S5", "S6", "S7", "S8"]),
    ("predefined_watch", ["S9", "S10", "S11"]),
]

NOISE_OR_LOCATION = {"S0", "S1", "S2", "S3", "S4"}


def fmt(v):
    return f"{v:.6f}"


class Kahan:
    """Compensated summation, mirroring the order used by the implementation."""

    def __init__(self):
        self.sum = 0.0
        self.c = 0.0

    def add(self, v):
        y = v - self.c
        t = self.sum + y
        self.c = (t - self.sum) - y
        self.sum = t


def canon(tag):
    return "".join(c.lower() for c in tag if c.isascii() and c.isalnum())


def tag_set(hashtags):
    return frozenset(c for c in (canon(t) for t in hashtags) if c and c not in STOPLIST)


def jaccard(a, b):
    if not a and not b:
        return 0.0
    return float(len(a & b)) / float(len(a | b))


def set_similarity(a, b, intra):
    total = Kahan()
    for i in range(len(a)):
        row = Kahan()
        for j in range(len(b)):
            if intra and i == j:
                continue
            row.add(jaccard(a[i], b[j]))
        total.add(row.sum)
    pairs = len(a) * (len(a) - 1) if intra else len(a) * len(b)
    return total.sum / float(pairs)


def window_mean(values):
    k = Kahan()
    for v in values:
        k.add(v)
    return k.sum / float(len(values))


def popularity_delta(organic, window):
    plays = [float(r["video"]["play_count"]) for r in organic]
    first = window_mean(plays[:window])
    last = window_mean(plays[-window:])
    return (last - first) / first * 100.0


def window_similarity_delta(x, y, window, intra):
    def sim(last):
        wx = x[-window:] if last else x[:window]
        if intra:
            return set_similarity(wx, wx, True)
        wy = y[-window:] if last else y[:window]
        return set_similarity(wx, wy, False)

    return (sim(True) - sim(False)) * 100.0


def matches_interest(video):
    for raw in video["hashtags"]:
        h = canon(raw)
        if not h:
            continue
        for t in INTERESTS:
            if t in h or h in t:
                return True
    return False


def interest_series(organic, bucket):
    out = []
    for start in range(0, len(organic), bucket):
        chunk = organic[start : start + bucket]
        hits = sum(1 for r in chunk if matches_interest(r["video"]))
        out.append(float(hits) / float(len(chunk)))
    return out


def plain_mean(values):
    s = 0.0
    for v in values:
        s += v
    return s / float(len(values))


def main():
    fixture = sys.argv[1] if len(sys.argv) > 1 else "tests/data/fixture.ndjson"
    out_dir = sys.argv[2] if len(sys.argv) > 2 else "tests/data/goldens"
    window = int(sys.argv[3]) if len(sys.argv) > 3 else 50
    bucket = int(sys.argv[4]) if len(sys.argv) > 4 else 30

    with open(fixture) as f:
        records = [json.loads(line) for line in f if line.strip()]

    feeds = {}
    for r in records:
        key = (r["scenario_id"], r["repetition"], r["bot_id"])
        feeds.setdefault(key, {"role": r["role"], "organic": []})
        if not r["video"]["is_ad"] and not r["video"]["is_live"]:
            feeds[key]["organic"].append(r)
    order = sorted(feeds)
    for key in order:
        feeds[key]["organic"].sort(key=lambda r: (r["run_index"], r["position"]))
    tags = {key: [tag_set(r["video"]["hashtags"]) for r in feeds[key]["organic"]]
            for key in order}

    table2 = "activity,control_delta_pct,personalised_delta_pct\n"
    for name, ids in TABLE2_GROUPS:
        control, personalised = [], []
        for key in order:
            if key[0] not in ids:
                continue
            d = popularity_delta(feeds[key]["organic"], window)
            (control if feeds[key]["role"] == "control" else personalised).append(d)
        if not control or not personalised:
            continue
        table2 += f"{name},{fmt(plain_mean(control))},{fmt(plain_mean(personalised))}\n"

    table3 = "activity,c_vs_p,c_vs_c,p_vs_p\n"
    for name, ids in TABLE3_GROUPS:
        cvp, cvc, pvp = [], [], []
        pairs = {}
        for key in order:
            if key[0] not in ids:
                continue
            slot = pairs.setdefault((key[0], key[1]), [None, None])
            slot[0 if feeds[key]["role"] == "control" else 1] = key
        for pair_key in sorted(pairs):
            ci, pi = pairs[pair_key]
            if ci is not None:
                cvc.append(window_similarity_delta(tags[ci], tags[ci], window, True))
            if pi is not None:
                pvp.append(window_similarity_delta(tags[pi], tags[pi], window, True))
            if ci is not None and pi is not None:
                cvp.append(window_similarity_delta(tags[ci], tags[pi], window, False))
        if not cvp:
            continue
        table3 += f"{name},{fmt(plain_mean(cvp))},{fmt(plain_mean(cvc))},{fmt(plain_mean(pvp))}\n"

    hm = [key for key in order if key[0] in NOISE_OR_LOCATION] or order
    heatmap = "feed_a,feed_b,measure,value\n"
    for a in range(len(hm)):
        for b in range(a, len(hm)):
            ta, tb = tags[hm[a]], tags[hm[b]]
            if not ta or not tb or (a == b and len(ta) < 2):
                continue
            v = set_similarity(ta, tb, a == b)
            heatmap += f"{hm[a][2]},{hm[b][2]},jaccard,{fmt(v)}\n"

    series = "feed,bucket_index,ratio\n"
    for key in order:
        for i, ratio in enumerate(interest_series(feeds[key]["organic"], bucket)):
            series += f"{key[2]},{i},{fmt(ratio)}\n"

    noise = "kind,feed_a,feed_b,value\n"
    noise_keys = [key for key in order if key[0] == "S0" and tags[key]]
    if len(noise_keys) >= 2:
        cross = []
        for i in range(len(noise_keys)):
            for j in range(i + 1, len(noise_keys)):
                cross.append((i, j, set_similarity(tags[noise_keys[i]], tags[noise_keys[j]], False)))
        for i, j, v in cross:
            noise += f"pair,{noise_keys[i][2]},{noise_keys[j][2]},{fmt(v)}\n"
        for i in range(len(noise_keys)):
            v = set_similarity(tags[noise_keys[i]], tags[noise_keys[i]], True)
            noise += f"intra,{noise_keys[i][2]},{noise_keys[i][2]},{fmt(v)}\n"
        k = Kahan()
        for _, _, v in cross:
            k.add(v)
        values = [v for _, _, v in cross]
        noise += f"mean,,,{fmt(k.sum / float(len(cross)))}\n"
        noise += f"min,,,{fmt(min(values))}\n"
        noise += f"max,,,{fmt(max(values))}\n"

    os.makedirs(out_dir, exist_ok=True)
    for name, content in [
        ("table2.csv", table2),
        ("table3.csv", table3),
        ("heatmap.csv", heatmap),
        ("interest_series.csv", series),
        ("noise_baseline.csv", noise),
    ]:
        with open(os.path.join(out_dir, name), "w") as f:
            f.write(content)
    print(f"wrote goldens to {out_dir}")


if __name__ == "__main__":
    main()
