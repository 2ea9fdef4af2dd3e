#!/usr/bin/env python3
"""Regenerate the synthetic CSV fixtures under data/.

Both files are fully synthetic and deterministic (fixed RNG seed). They exist
so dataset-mode runs and tests have small, stable inputs with known row
counts:

  family_synthetic.csv  2 sexes x 5 age buckets -> 10 arms
      326 rows total: 301 usable (31 in the female/(8,27] cell, 30 in every
      other cell), 12 rows with a missing value in a used column, 6 rows with
      an out-of-set sex value, 7 rows with an age outside (8, 99].
      One usable row has an empty person_id to show excluded columns may be
      blank.

  compas_synthetic.csv  2 races x 3 age buckets -> 6 arms
      160 rows total: 150 usable (25 per cell), 4 with a missing used value,
      3 with an out-of-set race, 3 with an age outside (0, 120].
"""

import csv
import random
from pathlib import Path

OUT = Path(__file__).resolve().parent.parent / "data"

EDUCATION = ["none", "primary", "secondary", "tertiary"]
REGION = ["north", "south", "east", "west"]


def family_rows(rng):
    edges = [8, 27, 45, 63, 81, 99]
    rows = []
    next_id = [1]

    def base_row(sex, bucket):
        age = rng.randint(edges[bucket] + 1, edges[bucket + 1])
        education = rng.choice(EDUCATION)
        region = rng.choice(REGION)
        hours = rng.randint(10, 60)
        dependents = rng.randint(0, 5)
        income = (12000 + 9000 * EDUCATION.index(education) + 350 * hours +
                  rng.uniform(-4000, 4000))
        if sex == "female":
            income *= 0.82  # depressed observations for the sensitive group
        row = {
            "person_id": str(next_id[0]),
            "sex": sex,
            "age": str(age),
            "education": education,
            "region": region,
            "hours_per_week": str(hours),
            "dependents": str(dependents),
            "income": f"{income:.2f}",
        }
        next_id[0] += 1
        return row

    for s, sex in enumerate(["female", "male"]):
        for b in range(5):
            for _ in range(30):
                rows.append(base_row(sex, b))

    # exercise the bucket boundaries: 27 belongs to (8,27], 28 to (27,45]
    rows[0]["age"] = "27"
    rows[30]["age"] = "28"

    # usable row with a blank excluded column
    extra = base_row("female", 0)
    extra["person_id"] = ""
    rows.append(extra)

    # rows dropped for a missing used value
    missing = []
    for col, count in [("education", 4), ("hours_per_week", 3), ("income", 2),
                       ("sex", 2), ("age", 1)]:
        for _ in range(count):
            row = base_row(rng.choice(["female", "male"]), rng.randint(0, 4))
            row[col] = ""
            missing.append(row)
    rows.extend(missing)

    # rows dropped for an out-of-set sensitive value
    for sex in ["other", "unknown", "other", "unknown", "other", "other"]:
        row = base_row("female", rng.randint(0, 4))
        row["sex"] = sex
        rows.append(row)

    # rows dropped for an age outside every bucket (age must satisfy 8 < a <= 99)
    for age in [5, 8, 8, 100, 103, 110, 120]:
        row = base_row("male", rng.randint(0, 4))
        row["age"] = str(age)
        rows.append(row)

    rng.shuffle(rows)
    return ["person_id", "sex", "age", "education", "region", "hours_per_week",
            "dependents", "income"], rows


def compas_rows(rng):
    edges = [0, 25, 45, 120]
    rows = []
    next_id = [1]

    def base_row(race, bucket):
        age = rng.randint(edges[bucket] + 1, edges[bucket + 1])
        priors = rng.randint(0, 15)
        decile = rng.randint(1, 10)
        recid = 1 if rng.random() < 0.25 + 0.04 * priors else 0
        row = {
            "case_id": str(next_id[0]),
            "race": race,
            "sex": rng.choice(["male", "female"]),
            "age": str(age),
            "charge_degree": rng.choice(["F", "M"]),
            "priors_count": str(priors),
            "decile_score": str(decile),
            "two_year_recid": str(recid),
        }
        next_id[0] += 1
        return row

    for race in ["african_american", "caucasian"]:
        for b in range(3):
            for _ in range(25):
                rows.append(base_row(race, b))

    for col in ["priors_count", "priors_count", "race", "two_year_recid"]:
        row = base_row(rng.choice(["african_american", "caucasian"]), rng.randint(0, 2))
        row[col] = ""
        rows.append(row)

    for _ in range(3):
        row = base_row("african_american", rng.randint(0, 2))
        row["race"] = "hispanic"
        rows.append(row)

    for age in [0, 121, 130]:
        row = base_row("caucasian", rng.randint(0, 2))
        row["age"] = str(age)
        rows.append(row)

    rng.shuffle(rows)
    return ["case_id", "race", "sex", "age", "charge_degree", "priors_count",
            "decile_score", "two_year_recid"], rows


def write(path, header, rows):
    with path.open("w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=header, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    print(f"wrote {path} ({len(rows)} rows)")


def main():
    OUT.mkdir(exist_ok=True)
    rng = random.Random(20240817)
    write(OUT / "family_synthetic.csv", *family_rows(rng))
    write(OUT / "compas_synthetic.csv", *compas_rows(rng))


if __name__ == "__main__":
    main()
