#!/usr/bin/env python3
"""Generate the bundled synthetic grocery transactions.

169 items, 9835 baskets, basket size ~ 1 + negative binomial (mean 4.4, std 3.5).
Items belong to 13 latent groups of 13; each basket leans on one group so that
co-purchase structure exists for the solvers to find.
"""
import argparse

import numpy as np

NAMES = """
frankfurter,sausage,liver loaf,ham,meat,finished products,organic sausage,chicken,
turkey,pork,beef,hamburger meat,fish,citrus fruit,tropical fruit,pip fruit,grapes,
berries,nuts/prunes,root vegetables,onions,herbs,other vegetables,
packaged fruit/vegetables,whole milk,butter,curd,dessert,butter milk,yogurt,
whipped/sour cream,beverages,UHT-milk,condensed milk,cream,soft cheese,sliced cheese,
hard cheese,cream cheese,processed cheese,spread cheese,curd cheese,specialty cheese,
mayonnaise,salad dressing,tidbits,frozen vegetables,frozen fruits,frozen meals,
frozen fish,frozen chicken,ice cream,frozen dessert,frozen potato products,
domestic eggs,rolls/buns,white bread,brown bread,pastry,roll products,
semi-finished bread,zwieback,potato products,flour,salt,rice,pasta,vinegar,oil,
margarine,specialty fat,sugar,artif. sweetener,honey,mustard,ketchup,spices,soups,
ready soups,Instant food products,sauces,cereals,organic products,baking powder,
preservation products,pudding powder,canned vegetables,canned fruit,
pickled vegetables,specialty vegetables,jam,sweet spreads,meat spreads,canned fish,
dog food,cat food,pet care,baby food,coffee,instant coffee,tea,cocoa drinks,
bottled water,soda,misc. beverages,fruit/vegetable juice,syrup,bottled beer,
canned beer,brandy,whisky,liquor,rum,specialty bar,chewing gum,chocolate,
cooking chocolate,specialty chocolate,candy,waffles,cake bar,salty snack,
long life bakery product,snack products,popcorn,white wine,red/blush wine,prosecco,
sparkling wine,liqueur,liquor (appetizer),napkins,dish cleaner,cleaner,detergent,
softener,decalcifier,bathroom cleaner,abrasive cleaner,toilet cleaner,
rubbing alcohol,hair spray,dental care,male cosmetics,make up remover,skin care,
female sanitary products,baby cosmetics,soap,light bulbs,sound storage medium,
newspapers,photo/film,pot plants,flower soil/fertilizer,kitchen towels,
house keeping products,candles,kitchen utensil,cookware,garden tools,shopping bags,
bags,hygiene articles,flower (seeds),nut snack,chocolate marshmallow,
frozen vegetables mix,fresh juice,smoked fish,organic milk,
"""


def item_names(n):
    names = []
    for raw in NAMES.replace("\n", "").split(","):
        name = raw.strip()
        if name and name not in names:
            names.append(name)
    while len(names) < n:
        names.append(f"item {len(names)}")
    return names[:n]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="data/groceries_synthetic.csv")
    ap.add_argument("--seed", type=int, default=20170601)
    ap.add_argument("--items", type=int, default=169)
    ap.add_argument("--groups", type=int, default=13)
    ap.add_argument("--transactions", type=int, default=9835)
    ap.add_argument("--affinity", type=float, default=0.75)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    names = item_names(args.items)
    group = rng.permutation(np.arange(args.items) % args.groups)
    popularity = rng.zipf(1.6, args.items).astype(float)
    popularity = np.minimum(popularity, 60.0)

    # size - 1 ~ NB with mean 3.4, variance 3.5^2
    mean, var = 3.4, 3.5**2
    p = mean / var
    r = mean * p / (1 - p)

    lines = [f"# synthetic grocery baskets, seed {args.seed}"]
    for _ in range(args.transactions):
        size = min(1 + rng.negative_binomial(r, p), args.items)
        home = rng.integers(args.groups)
        picked = []
        while len(picked) < size:
            local = rng.random() < args.affinity
            mask = np.ones(args.items, bool)
            mask[picked] = False
            if local and (mask & (group == home)).any():
                mask &= group == home
            w = popularity * mask
            picked.append(int(rng.choice(args.items, p=w / w.sum())))
        lines.append(",".join(names[i] for i in picked))

    with open(args.out, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")


if __name__ == "__main__":
    main()
