#!/usr/bin/env python3
"""Regenerates assets/wordvecs.txt from a fixed seed.

The vectors are synthetic: the benchmark's object and landmark words form an
orthonormal set, a handful of related words are built as mixtures of those
anchors, and every other vocabulary word is an isotropic random direction.

    python3 tools/make_assets.py assets/
"""

import sys
from pathlib import Path

import numpy as np
from sklearn.feature_extraction.text import ENGLISH_STOP_WORDS

DIM = 50
SEED = 20221014

ANCHORS = [
    # landmarks
    "tv", "monitor", "sofa", "dining", "table", "armchair", "side", "coffee",
    "desk", "bed", "drawer",
    # targets
    "remote", "control", "laptop", "book", "apple", "cd", "pot", "bowl",
    "alarm", "clock", "teddy", "bear", "cellphone", "spray", "bottle",
    "pillow", "cup", "tumbler", "notebook", "mug", "wallet", "glasses",
]

# word -> {anchor: weight}; the remainder of the unit norm is random.
RELATED = {
    "couch": {"sofa": 0.85},
    "nightstand": {"side": 0.5, "table": 0.5, "bed": 0.3},
    "bookshelf": {"book": 0.5},
    "bookcase": {"book": 0.45},
    "bedroom": {"bed": 0.7},
    "office": {"desk": 0.55},
    "computer": {"laptop": 0.6, "desk": 0.3},
    "study": {"desk": 0.4, "book": 0.3},
    "dresser": {"drawer": 0.7},
    "television": {"tv": 0.8, "monitor": 0.4},
    "screen": {"monitor": 0.6, "tv": 0.3},
    "recliner": {"armchair": 0.7},
    "chair": {"armchair": 0.55},
    "loveseat": {"sofa": 0.6, "armchair": 0.3},
    "livingroom": {"sofa": 0.35, "coffee": 0.2, "table": 0.2},
    "kitchen": {"dining": 0.3, "pot": 0.3, "bowl": 0.3},
    "cupboard": {"drawer": 0.35},
    "mattress": {"bed": 0.75},
    "crib": {"bed": 0.5, "teddy": 0.3},
    "toy": {"teddy": 0.5, "bear": 0.3},
    "phone": {"cellphone": 0.85},
    "fruit": {"apple": 0.6},
    "stove": {"pot": 0.5},
    "dish": {"bowl": 0.5, "dining": 0.2},
    "mugs": {"mug": 0.8, "cup": 0.4},
    "teacup": {"cup": 0.8},
    "cushion": {"pillow": 0.7, "sofa": 0.3},
    "blanket": {"pillow": 0.4, "bed": 0.4},
    "clocks": {"clock": 0.85},
    "music": {"cd": 0.5},
    "dvd": {"cd": 0.7, "tv": 0.2},
    "remotes": {"remote": 0.8, "control": 0.3},
    "lamp": {"side": 0.3, "table": 0.3},
    "workstation": {"desk": 0.6, "laptop": 0.3},
    "endtable": {"side": 0.5, "table": 0.5},
}

HOUSEHOLD = """
room kitchen bathroom hallway closet garage attic basement porch balcony garden yard
shelf shelves cabinet counter countertop sink refrigerator fridge freezer oven microwave
toaster dishwasher cabinetry pantry basket bin box crate container case bag backpack purse
pocket handbag suitcase luggage trunk car truck bus train station airport hotel motel
restaurant cafe bar pub store shop market supermarket grocery mall bookstore library school
classroom university college campus church museum hospital clinic pharmacy bank park street
road highway bridge city town village house home apartment building tower floor ceiling wall
door window curtain blinds rug carpet mat stairs staircase fireplace mantel heater radiator
fan vent light bulb candle mirror painting picture frame poster vase plant flower tree bush
grass lawn fence gate mailbox trash garbage recycling can bucket broom mop vacuum cleaner
detergent soap shampoo towel toothbrush toothpaste toilet shower bathtub faucet tap hose
laundry washer dryer iron ironing board hanger wardrobe armoire chest locker safe stand
entertainment center console speaker stereo radio player record vinyl headphones earbuds
charger cable cord outlet plug battery keyboard mouse printer scanner router modem tablet
camera tripod projector game controller joystick puzzle doll ball bat racket helmet bicycle
skateboard scooter stroller cradle diaper bottle formula jar can tin lid plate fork spoon
knife chopsticks napkin tablecloth placemat tray platter pan skillet kettle teapot cooker
blender mixer grater colander strainer ladle spatula whisk cutting boards rack hook peg
drawerful dresserful bookend folder binder file paper pen pencil marker crayon eraser ruler
stapler tape scissors glue envelope stamp letter card calendar planner diary journal magazine
newspaper novel dictionary textbook manual map atlas globe lamp lantern flashlight torch
umbrella coat jacket hat cap scarf gloves shoes boots sneakers sandals socks shirt pants
jeans dress skirt sweater hoodie uniform pajamas robe slippers belt tie watch bracelet
necklace ring earrings jewelry makeup perfume lotion brush comb razor hairdryer
bread cheese milk butter egg eggs meat chicken beef pork fish rice pasta noodles soup salad
sandwich pizza burger cake cookie pie candy chocolate sugar salt pepper spice sauce oil
vinegar honey jam cereal snack fruit banana orange grape lemon lime peach pear cherry berry
strawberry melon watermelon pineapple mango vegetable carrot potato tomato onion garlic
lettuce cabbage broccoli corn bean beans pea peas nut nuts coffeepot coffeemaker espresso
tea juice water soda beer wine whiskey vodka drink beverage glass wineglass pitcher jug
flask thermos canteen
dog cat bird fish hamster rabbit horse cow pig sheep goat chicken duck mouse rat snake
person man woman child children kid kids baby boy girl friend family mother father brother
sister teacher student doctor nurse worker chef waiter driver pilot soldier police officer
morning afternoon evening night day week month year time hour minute second today tomorrow
red blue green yellow black white brown gray grey pink purple orange gold silver dark bright
big small large tiny huge long short tall wide narrow thick thin heavy light soft hard
old new young clean dirty wet dry hot cold warm cool empty full open closed broken fixed
wooden plastic metal glass leather cotton wool paper stone concrete steel iron aluminum
left right front back top bottom middle center corner edge inside outside near far above
below under over behind beside between around across along through
sit stand lie sleep eat drink cook wash clean read write watch listen play work study
walk run drive ride fly swim open close carry hold put place keep store hide find search
look see hear feel touch smell taste buy sell give take bring send use make build break
fix paint draw sing dance laugh cry talk speak call text type print charge wear fold
""".split()


def main(out_dir: Path) -> None:
    rng = np.random.default_rng(SEED)

    q, _ = np.linalg.qr(rng.standard_normal((DIM, DIM)))
    vectors = {w: q[:, i].copy() for i, w in enumerate(ANCHORS)}

    def random_unit():
        v = rng.standard_normal(DIM)
        return v / np.linalg.norm(v)

    for word, weights in RELATED.items():
        v = sum(wt * vectors[a] for a, wt in weights.items())
        rest = max(0.05, 1.0 - sum(wt * wt for wt in weights.values()))
        v = v + np.sqrt(rest) * random_unit()
        vectors[word] = v / np.linalg.norm(v)

    excluded = {"a", "of", "photo"}
    filler = sorted(set(HOUSEHOLD) | set(ENGLISH_STOP_WORDS))
    for w in filler:
        if w in vectors or w in excluded:
            continue
        vectors[w] = random_unit()

    # Prompt categories must be in vocabulary.
    for w in ["background", "road", "scene", "house", "animal", "fashion", "accessory",
              "transport", "traffic", "sign", "home", "appliance", "food", "sport",
              "equipment", "furniture", "office", "supplies", "electronics", "kitchenware"]:
        vectors.setdefault(w, random_unit())

    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "wordvecs.txt", "w") as f:
        f.write(f"# synthetic word vectors, dim {DIM}, seed {SEED}\n")
        for w in sorted(vectors):
            f.write(w + " " + " ".join(f"{x:.6f}" for x in vectors[w]) + "\n")
    print(f"wrote {len(vectors)} words")


if __name__ == "__main__":
    main(Path(sys.argv[1] if len(sys.argv) > 1 else "assets"))
