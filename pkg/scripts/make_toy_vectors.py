#!/usr/bin/env python3
"""Regenerate the bundled toy vector table.

Builds a small word-embedding table from hand-picked topic clusters. Related
clusters share a super-group direction (outdoor leisure pulls park, fishing,
and stargazing words together the way a real embedding would), each cluster
offsets from its super-group, and each word adds small jitter around its
cluster. A batch of common filler vocabulary keeps the table large enough
that a 40-neighbor query stays topically focused. Deterministic (fixed RNG
seed); run from the repo root:

    python scripts/make_toy_vectors.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "src" / "memochat" / "data" / "toy_vectors.txt"

DIMENSION = 8
CLUSTER_SPREAD = 0.45   # cluster offset within its super-group
JITTER = 0.06           # per-word offset within its cluster
SEED = 20240817

# super-group -> cluster -> words
GROUPS = {
    "outdoor_leisure": {
        "park": [
            "park", "garden", "playground", "outdoors", "picnic", "bench",
            "pond", "lake", "trees", "flowers", "grass", "公园", "花园",
        ],
        "fishing": [
            "fishing", "fish", "angling", "rod", "bait", "river", "catch",
            "钓鱼", "鱼",
        ],
        "stars": [
            "stars", "star", "stargazing", "night", "sky", "moon",
            "telescope", "星星", "月亮",
        ],
        "friends": [
            "friends", "friend", "neighbor", "neighbors", "companion",
            "buddy", "gathering", "reunion", "朋友", "邻居",
        ],
    },
    "household": {
        "food": [
            "cooking", "cook", "kitchen", "dinner", "meal", "recipe",
            "dumplings", "tea", "noodles", "porridge", "做饭", "饺子", "茶",
        ],
        "family": [
            "grandson", "granddaughter", "grandchild", "grandchildren",
            "family", "daughter", "son", "nephew", "niece", "孙子", "家人",
            "女儿",
        ],
    },
    "learning": {
        "school": [
            "studies", "study", "school", "homework", "exam", "teacher",
            "class", "learning", "grades", "university", "学习", "学校",
            "功课",
        ],
    },
    "wellbeing": {
        "health": [
            "doctor", "hospital", "medicine", "health", "exercise",
            "checkup", "nurse", "therapy", "医生", "健康", "医院",
        ],
        "sports": [
            "rowing", "swimming", "taichi", "basketball", "running",
            "walking", "jogging", "太极", "游泳",
        ],
    },
    "weather": {
        "weather": [
            "weather", "rain", "rainy", "sunny", "sunshine", "cloudy",
            "wind", "snow", "storm", "forecast", "temperature", "天气",
            "下雨",
        ],
    },
    "pastimes": {
        "hobby": [
            "chess", "painting", "calligraphy", "singing", "opera",
            "dancing", "gardening", "knitting", "photography", "下棋",
            "唱歌", "书法",
        ],
        "travel": [
            "travel", "trip", "mountain", "temple", "visit", "tour",
            "scenery", "vacation", "journey", "旅行", "爬山", "寺庙",
        ],
    },
    "calendar": {
        "time": [
            "yesterday", "today", "tomorrow", "morning", "evening",
            "afternoon", "weekend", "holiday", "festival", "birthday",
            "昨天", "今天", "明天",
        ],
    },
    "sentiment": {
        "feelings": [
            "happy", "glad", "lonely", "tired", "excited", "proud", "miss",
            "remember", "memories", "高兴", "想念",
        ],
    },
}

# Common vocabulary that pads the table so neighbor queries have plenty of
# unrelated words to rank below the topical ones.
FILLER = """
table chair window door roof wall floor ceiling lamp mirror carpet curtain
shelf drawer cabinet couch pillow blanket clock radio television newspaper
magazine letter envelope stamp pencil paper scissors basket bucket bottle
cup plate bowl spoon fork knife pot pan stove fridge towel soap brush comb
coat jacket sweater shirt trousers skirt dress shoes boots gloves scarf hat
umbrella wallet purse glasses watch ring necklace button zipper pocket
street road bridge corner crossing station platform ticket train bus taxi
bicycle truck engine wheel seatbelt driver passenger journey luggage map
city town village county province country border island coast beach desert
forest valley hill cliff cave stream waterfall field farm barn fence crop
wheat rice corn bean potato tomato cabbage carrot onion garlic pepper salt
sugar vinegar sauce oil flour bread cake cookie candy fruit apple orange
banana grape peach pear plum melon cherry berry lemon walnut peanut
animal dog cat bird horse cow sheep goat pig chicken duck goose rabbit
mouse squirrel deer bear wolf fox tiger lion elephant monkey panda dolphin
whale turtle frog snake insect butterfly bee ant spider worm snail
music song melody rhythm drum flute violin piano guitar trumpet chorus
stage audience applause ticket curtain rehearsal concert festival parade
doctor's bankbook market shop store counter price coin banknote receipt
bargain customer seller cashier queue basket cart discount refund warranty
message phone call signal battery charger screen keyboard mouse printer
camera photo album video speaker headphone cable plug socket switch bulb
morning's spring summer autumn winter season month week hour minute second
north south east west left right front back middle top bottom edge center
red orange yellow green blue purple pink brown black white gray golden
silver bright dark pale deep light heavy soft hard smooth rough warm cool
quick slow early late near far high low long short wide narrow thick thin
new old young fresh clean dirty quiet loud empty full open closed broken
repair build paint wash sweep fold carry lift push pull throw catch drop
hold carry bring take send receive borrow lend buy sell pay earn save
spend count measure weigh cut chop slice boil steam fry bake roast taste
smell touch listen watch read write draw sketch sing dance jump climb
swim float row drive ride walk run rest sleep dream wake stretch breathe
laugh smile cry shout whisper talk speak tell ask answer explain promise
agree refuse invite welcome greet thank apologize forgive encourage praise
""".split()


def main() -> None:
    rng = np.random.default_rng(SEED)
    lines = [
        "# Toy word-vector table for offline tests and the demo.",
        "# Regenerate with scripts/make_toy_vectors.py (deterministic).",
        "# Format: word<TAB>f1 f2 ... f8",
    ]
    seen: set[str] = set()
    total = 0

    def emit(word: str, vec: np.ndarray) -> None:
        nonlocal total
        norm = word.lower()
        if norm in seen:
            return
        seen.add(norm)
        components = " ".join(f"{x:.6f}" for x in vec / np.linalg.norm(vec))
        lines.append(f"{word}\t{components}")
        total += 1

    for group, clusters in GROUPS.items():
        group_base = rng.normal(size=DIMENSION)
        group_base /= np.linalg.norm(group_base)
        for cluster, words in clusters.items():
            offset = rng.normal(size=DIMENSION)
            base = group_base + CLUSTER_SPREAD * offset / np.linalg.norm(offset)
            base /= np.linalg.norm(base)
            lines.append(f"# {group} / {cluster}")
            for word in words:
                emit(word, base + rng.normal(scale=JITTER, size=DIMENSION))

    lines.append("# filler vocabulary")
    chunk = 15
    for start in range(0, len(FILLER), chunk):
        base = rng.normal(size=DIMENSION)
        base /= np.linalg.norm(base)
        for word in FILLER[start : start + chunk]:
            emit(word, base + rng.normal(scale=JITTER, size=DIMENSION))

    OUT.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {total} words to {OUT}")


if __name__ == "__main__":
    main()
