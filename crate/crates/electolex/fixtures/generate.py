"""Writes the synthetic fixtures used by the tests.

    python3 generate.py

synthetic12/   12 candidates, four per ideology class
six/           6 candidates, two per ideology class
proportional/  12 candidates whose votes are exactly 10x their in-window retweets
"""

import csv
import json
import os
import random
from datetime import datetime, timedelta, timezone

SHARED = (
    "país votos campaña ciudad salud educación seguridad empleo trabajo paz "
    "gobierno gobernación región campo agua vías familias jóvenes mujeres "
    "futuro propuesta compromiso comunidad desarrollo progreso"
).split()
BY_CLASS = {
    "traditional": (
        "partido tradición experiencia liberal conservador instituciones orden "
        "gestión obras inversión proyectos alcaldía"
    ).split(),
    "independent": (
        "ciudadanos independiente cambio firmas movimiento transparencia "
        "corrupción renovación participación veeduría honestidad"
    ).split(),
    "alliance": (
        "coalición alianza unidad acuerdo convergencia fuerzas sumamos juntos "
        "programa concertación consenso"
    ).split(),
}
STOP = "de la que el en y los por las con para una su al del es se lo como más".split()
DEPARTMENTS = ["Antioquia", "Cundinamarca", "Valle del Cauca", "Nariño", "Boyacá", "Santander"]
BOGOTA = timezone(timedelta(hours=-5))
START = datetime(2015, 10, 1, tzinfo=BOGOTA)


def tweet_text(rng, cls, own):
    words = []
    for _ in range(rng.randint(6, 14)):
        r = rng.random()
        if r < 0.35:
            words.append(rng.choice(STOP))
        elif r < 0.65:
            words.append(rng.choice(SHARED))
        elif r < 0.9:
            words.append(rng.choice(BY_CLASS[cls]))
        else:
            words.append(rng.choice(own))
    if rng.random() < 0.3:
        words.insert(0, "@" + rng.choice(["RegistraduriaC", "noticiasRCN", "elespectador"]))
    if rng.random() < 0.3:
        words.append("#" + rng.choice(["Elecciones2015", "VotaBien", "Colombia"]))
    if rng.random() < 0.2:
        words.append("http://t.co/%06x" % rng.getrandbits(24))
    text = " ".join(words)
    if rng.random() < 0.2:
        text = "<b>" + text + "</b> &amp; " + str(rng.randint(1, 2015))
    if rng.random() < 0.3:
        text = "¡" + text.capitalize() + "!"
    return text


def candidates(n_per_class, seed):
    rng = random.Random(seed)
    out = []
    k = 0
    for cls in ["traditional", "independent", "alliance"]:
        for _ in range(n_per_class):
            k += 1
            out.append(
                {
                    "candidate_id": "c%02d" % k,
                    "twitter_username": "@candidato%02d" % k,
                    "party_name": {"traditional": "Partido %d", "independent": "Movimiento %d", "alliance": "Coalición %d"}[cls] % k,
                    "ideology_class": cls,
                    "department": rng.choice(DEPARTMENTS),
                    "votes_received": 0,
                    "followers": rng.randint(800, 250000),
                }
            )
    return out


def tweets_for(rng, cand, own):
    n_in = rng.randint(12, 40)
    rows = []
    for _ in range(n_in):
        ts = START + timedelta(seconds=rng.randint(0, 24 * 86400 - 1))
        rows.append((ts, True))
    for _ in range(rng.randint(0, 3)):
        ts = START + timedelta(days=rng.choice([-3, -2, -1, 24, 25, 26]), seconds=rng.randint(0, 86399))
        rows.append((ts, False))
    out = []
    for ts, inside in rows:
        rt = int(rng.expovariate(1 / 40.0))
        out.append(
            {
                "candidate_id": cand["candidate_id"],
                "text": tweet_text(rng, cand["ideology_class"], own),
                "retweet_count": rt,
                "timestamp": ts.isoformat(),
                "_inside": inside,
            }
        )
    return out


def build(n_per_class, seed, votes_rule):
    rng = random.Random(seed)
    cands = candidates(n_per_class, seed)
    own_words = ["ecopetrol", "metro", "páramo", "puerto", "café", "minería", "turismo", "río", "bosque", "universidad", "hospital", "colegio"]
    tweets = []
    for i, c in enumerate(cands):
        own = [own_words[i % len(own_words)], own_words[(i * 5 + 3) % len(own_words)]]
        rows = tweets_for(rng, c, own)
        retweets = sum(t["retweet_count"] for t in rows if t["_inside"])
        c["votes_received"] = votes_rule(rng, retweets, c)
        tweets.extend(rows)
    # interleave candidates the way a crawl would
    tweets.sort(key=lambda t: t["timestamp"])
    return cands, tweets


def write(dirname, cands, tweets):
    os.makedirs(dirname, exist_ok=True)
    with open(os.path.join(dirname, "candidates.csv"), "w", newline="", encoding="utf-8") as f:
        w = csv.DictWriter(f, fieldnames=list(cands[0].keys()), lineterminator="\n")
        w.writeheader()
        w.writerows(cands)
    with open(os.path.join(dirname, "tweets.jsonl"), "w", encoding="utf-8") as f:
        for t in tweets:
            t = {k: v for k, v in t.items() if not k.startswith("_")}
            f.write(json.dumps(t, ensure_ascii=False) + "\n")


def noisy_votes(rng, retweets, c):
    return int(2000 + 25 * retweets + rng.gauss(0, 4000) ** 2 / 1000 + c["followers"] / 20)


if __name__ == "__main__":
    here = os.path.dirname(os.path.abspath(__file__))
    write(os.path.join(here, "synthetic12"), *build(4, 2015, noisy_votes))
    write(os.path.join(here, "six"), *build(2, 1025, noisy_votes))
    write(os.path.join(here, "proportional"), *build(4, 24, lambda rng, rt, c: 10 * rt))
