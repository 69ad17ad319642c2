#!/usr/bin/env python3
"""Regenerate the bundled data tables and the training corpus.

Writes data/morphology.tsv, data/lexicon.tsv, data/gazetteer.tsv and
data/corpus/{train_pairs.jsonl,articles.txt}. Output is deterministic.
"""

import argparse
import json
import random
from pathlib import Path

# ---------------------------------------------------------------------------
# Morphology

# lemma: (past, participle); None means regular
IRREGULAR = {
    "be": None, "have": None, "do": None, "go": ("went", "gone"),
    "arise": ("arose", "arisen"), "become": ("became", "become"), "begin": ("began", "begun"),
    "bring": ("brought", "brought"), "build": ("built", "built"), "buy": ("bought", "bought"),
    "catch": ("caught", "caught"), "choose": ("chose", "chosen"), "come": ("came", "come"),
    "cut": ("cut", "cut"), "draw": ("drew", "drawn"), "drink": ("drank", "drunk"),
    "drive": ("drove", "driven"), "eat": ("ate", "eaten"), "fall": ("fell", "fallen"),
    "feel": ("felt", "felt"), "fight": ("fought", "fought"), "find": ("found", "found"),
    "fly": ("flew", "flown"), "forget": ("forgot", "forgotten"), "get": ("got", "gotten"),
    "give": ("gave", "given"), "grow": ("grew", "grown"), "hold": ("held", "held"),
    "keep": ("kept", "kept"), "know": ("knew", "known"), "lead": ("led", "led"),
    "leave": ("left", "left"), "lend": ("lent", "lent"), "let": ("let", "let"),
    "lie": ("lay", "lain"), "lose": ("lost", "lost"), "make": ("made", "made"),
    "mean": ("meant", "meant"), "meet": ("met", "met"), "pay": ("paid", "paid"),
    "put": ("put", "put"), "read": ("read", "read"), "ride": ("rode", "ridden"),
    "rise": ("rose", "risen"), "run": ("ran", "run"), "say": ("said", "said"),
    "see": ("saw", "seen"), "sell": ("sold", "sold"), "send": ("sent", "sent"),
    "set": ("set", "set"), "shake": ("shook", "shaken"), "shine": ("shone", "shone"),
    "shoot": ("shot", "shot"), "show": ("showed", "shown"), "sing": ("sang", "sung"),
    "sink": ("sank", "sunk"), "sit": ("sat", "sat"), "sleep": ("slept", "slept"),
    "speak": ("spoke", "spoken"), "spend": ("spent", "spent"), "stand": ("stood", "stood"),
    "steal": ("stole", "stolen"), "strike": ("struck", "struck"), "swim": ("swam", "swum"),
    "take": ("took", "taken"), "teach": ("taught", "taught"), "tell": ("told", "told"),
    "think": ("thought", "thought"), "throw": ("threw", "thrown"), "understand": ("understood", "understood"),
    "wake": ("woke", "woken"), "wear": ("wore", "worn"), "win": ("won", "won"),
    "write": ("wrote", "written"), "bear": ("bore", "born"), "beat": ("beat", "beaten"),
    "bind": ("bound", "bound"), "bite": ("bit", "bitten"), "blow": ("blew", "blown"),
    "break": ("broke", "broken"), "deal": ("dealt", "dealt"), "dig": ("dug", "dug"),
    "feed": ("fed", "fed"), "flee": ("fled", "fled"), "forbid": ("forbade", "forbidden"),
    "freeze": ("froze", "frozen"), "hang": ("hung", "hung"), "hear": ("heard", "heard"),
    "hide": ("hid", "hidden"), "hit": ("hit", "hit"), "hurt": ("hurt", "hurt"),
    "lay": ("laid", "laid"), "light": ("lit", "lit"), "ring": ("rang", "rung"),
    "seek": ("sought", "sought"), "shut": ("shut", "shut"), "slide": ("slid", "slid"),
    "spin": ("spun", "spun"), "split": ("split", "split"), "spread": ("spread", "spread"),
    "spring": ("sprang", "sprung"), "stick": ("stuck", "stuck"), "sting": ("stung", "stung"),
    "swear": ("swore", "sworn"), "sweep": ("swept", "swept"), "swing": ("swung", "swung"),
    "tear": ("tore", "torn"), "weep": ("wept", "wept"), "wind": ("wound", "wound"),
    "overcome": ("overcame", "overcome"), "undertake": ("undertook", "undertaken"),
    "withdraw": ("withdrew", "withdrawn"), "forgive": ("forgave", "forgiven"),
}

REGULAR = """
accept achieve add admire agree allow announce appear apply appoint arrive ask attack attend
award base believe belong border call capture carry cause celebrate change claim close collect
compose conquer consider contain continue control create cross declare defeat defend describe
design destroy develop die discover divide elect employ end enter establish examine explain
export face finish flow follow form found govern graduate happen help host hope import
include increase introduce invade invent join kill last launch learn like list live locate
look love manage marry mention move name need occupy offer open order organize own paint pass
perform place plan play point prefer prepare present print produce protect prove publish pull
reach receive record reduce reform release remain remember replace report represent require
rest return rule save score serve settle share sign situate start stay stop study succeed
suggest supply support surround talk travel try turn unite use visit vote walk want watch
work worry
""".split()

DOUBLING = {"plan", "stop", "ship"}


def regular_forms(lemma):
    if lemma.endswith("e"):
        past = lemma + "d"
        ing = lemma[:-1] + "ing"
    elif lemma.endswith("y") and lemma[-2] not in "aeiou":
        past = lemma[:-1] + "ied"
        ing = lemma + "ing"
    elif lemma in DOUBLING:
        past = lemma + lemma[-1] + "ed"
        ing = lemma + lemma[-1] + "ing"
    else:
        past = lemma + "ed"
        ing = lemma + "ing"
    return past, past, ing


def third_person(lemma):
    if lemma.endswith(("s", "sh", "ch", "x", "z", "o")):
        return lemma + "es"
    if lemma.endswith("y") and lemma[-2] not in "aeiou":
        return lemma[:-1] + "ies"
    return lemma + "s"


def ing_form(lemma):
    if lemma.endswith("ie"):
        return lemma[:-2] + "ying"
    if lemma.endswith("e") and not lemma.endswith(("ee", "ye")) and lemma != "be":
        return lemma[:-1] + "ing"
    if len(lemma) == 3 and lemma[1] in "aeiou" and lemma[2] not in "aeiouwxy" and lemma[0] not in "aeiou":
        return lemma + lemma[-1] + "ing"
    if lemma in {"begin", "forget", "forbid", "swim", "spin", "win", "run", "sit", "cut", "hit", "let", "put", "set",
                 "shut", "dig", "get"}:
        return lemma + lemma[-1] + "ing"
    return lemma + "ing"


def morphology_rows():
    rows = [
        ("be", "VB", "be"), ("be", "VBP", "am"), ("be", "VBP", "are"), ("be", "VBZ", "is"),
        ("be", "VBD", "was"), ("be", "VBD", "were"), ("be", "VBN", "been"), ("be", "VBG", "being"),
        ("have", "VB", "have"), ("have", "VBP", "have"), ("have", "VBZ", "has"), ("have", "VBD", "had"),
        ("have", "VBN", "had"), ("have", "VBG", "having"),
        ("do", "VB", "do"), ("do", "VBP", "do"), ("do", "VBZ", "does"), ("do", "VBD", "did"),
        ("do", "VBN", "done"), ("do", "VBG", "doing"),
        ("go", "VB", "go"), ("go", "VBP", "go"), ("go", "VBZ", "goes"), ("go", "VBD", "went"),
        ("go", "VBN", "gone"), ("go", "VBG", "going"),
    ]
    for lemma, forms in sorted(IRREGULAR.items()):
        if forms is None or lemma == "go":
            continue
        past, part = forms
        rows += [(lemma, "VB", lemma), (lemma, "VBP", lemma), (lemma, "VBZ", third_person(lemma)),
                 (lemma, "VBD", past), (lemma, "VBN", part), (lemma, "VBG", ing_form(lemma))]
    for lemma in sorted(set(REGULAR)):
        past, part, ing = regular_forms(lemma)
        rows += [(lemma, "VB", lemma), (lemma, "VBP", lemma), (lemma, "VBZ", third_person(lemma)),
                 (lemma, "VBD", past), (lemma, "VBN", part), (lemma, "VBG", ing)]
    return rows


# ---------------------------------------------------------------------------
# Lexicon

CLOSED = {
    "DT": "the a an this that these those each every some any no all both another",
    "IN": "of in on at from by with about into through during before after above below between "
          "under over near since until without within across against among along around behind "
          "beyond despite except like outside per than toward upon via while although because if "
          "unless whereas though",
    "CC": "and or but nor yet",
    "PRP": "i you he she it we they me him her us them",
    "PRP$": "my your his its our their",
    "WP": "who whom what",
    "WP$": "whose",
    "WDT": "which",
    "WRB": "where when why how",
    "MD": "can could may might must shall should will would",
    "TO": "to",
    "EX": "there",
    "RB": "not also very still only already often never always however once soon then now here too "
          "about almost nearly",
}

NOUNS = """
president king queen prince princess emperor chancellor minister mayor governor leader ruler
capital city country state nation region continent river mountain lake sea island border
population language currency university company team club band novel book film song painting
century year decade month day history war battle treaty empire kingdom republic government
parliament army people citizen player singer writer author poet painter composer scientist
inventor engineer actor actress director founder member winner champion title prize award
water land area part north south east west centre center world time man woman child family
school church castle bridge tower museum theatre street square station airport port industry
economy trade music art science work life name home birth death
""".split()

ADJECTIVES = """
famous large small big old new great long high low rich poor ancient modern national
international european american african asian official main major important popular
current former first last second third beautiful largest biggest oldest longest highest
smallest northern southern eastern western central
""".split()

NUMBERS = "one two three four five six seven eight nine ten hundred thousand million billion".split()


def lexicon_rows():
    rows = []
    for tag, words in CLOSED.items():
        for w in words.split():
            rows.append((w, tag, "_"))
    for w in NOUNS:
        rows.append((w, "NN", "_"))
        plural = w[:-1] + "ies" if w.endswith("y") and w[-2] not in "aeiou" else (
            w + "es" if w.endswith(("s", "sh", "ch", "x")) else w + "s")
        if w not in {"people", "water", "music", "art", "science", "history", "industry", "economy", "trade", "life",
                     "birth", "death"}:
            rows.append((plural, "NNS", w))
    rows.append(("men", "NNS", "man"))
    rows.append(("women", "NNS", "woman"))
    rows.append(("children", "NNS", "child"))
    for w in ADJECTIVES:
        tag = "JJS" if w.endswith("est") or w in {"largest", "biggest"} else "JJ"
        rows.append((w, tag, "_"))
    for w in NUMBERS:
        rows.append((w, "CD", "_"))
    # collapse duplicates, first wins
    seen, out = set(), []
    for r in rows:
        if r[0] not in seen:
            seen.add(r[0])
            out.append(r)
    return out


# ---------------------------------------------------------------------------
# Gazetteer and corpus entities

COUNTRIES = [
    ("Slovakia", "Bratislava", "Europe"), ("Czechia", "Prague", "Europe"), ("Austria", "Vienna", "Europe"),
    ("Hungary", "Budapest", "Europe"), ("Poland", "Warsaw", "Europe"), ("Germany", "Berlin", "Europe"),
    ("France", "Paris", "Europe"), ("Spain", "Madrid", "Europe"), ("Portugal", "Lisbon", "Europe"),
    ("Italy", "Rome", "Europe"), ("Greece", "Athens", "Europe"), ("Sweden", "Stockholm", "Europe"),
    ("Norway", "Oslo", "Europe"), ("Finland", "Helsinki", "Europe"), ("Denmark", "Copenhagen", "Europe"),
    ("Ireland", "Dublin", "Europe"), ("Belgium", "Brussels", "Europe"), ("Croatia", "Zagreb", "Europe"),
    ("Serbia", "Belgrade", "Europe"), ("Romania", "Bucharest", "Europe"), ("Bulgaria", "Sofia", "Europe"),
    ("Ukraine", "Kyiv", "Europe"), ("Slovenia", "Ljubljana", "Europe"), ("Estonia", "Tallinn", "Europe"),
    ("Latvia", "Riga", "Europe"), ("Lithuania", "Vilnius", "Europe"), ("Thailand", "Bangkok", "Asia"),
    ("Japan", "Tokyo", "Asia"), ("China", "Beijing", "Asia"), ("India", "Delhi", "Asia"),
    ("Vietnam", "Hanoi", "Asia"), ("Nepal", "Kathmandu", "Asia"), ("Mongolia", "Ulaanbaatar", "Asia"),
    ("Egypt", "Cairo", "Africa"), ("Kenya", "Nairobi", "Africa"), ("Morocco", "Rabat", "Africa"),
    ("Ghana", "Accra", "Africa"), ("Ethiopia", "Addis Ababa", "Africa"), ("Peru", "Lima", "America"),
    ("Chile", "Santiago", "America"), ("Argentina", "Buenos Aires", "America"), ("Mexico", "Mexico City", "America"),
    ("Canada", "Ottawa", "America"), ("Brazil", "Brasilia", "America"), ("Colombia", "Bogota", "America"),
    ("Cuba", "Havana", "America"), ("Australia", "Canberra", "Oceania"),
]

FIRST = """Peter Andrej Martin Jana Zuzana Michal Tomas Lucia Eva Pavol Karel Milan Anna Maria
Juraj Viktor Helena Ivan Marek Simona Daniel Robert Klara Ondrej Filip Natalia Adam Lena Oskar Greta
Hugo Irena Bruno Vera Emil Dora Leon Nina Felix Alma""".split()

LAST = """Sagan Kiska Novak Horvath Kovac Varga Toth Balaz Hruska Kral Dvorak Cerny Svoboda Urban
Blaha Polak Benes Fiala Kolar Marek Moravec Stastny Vlcek Zeman Kubala Lesko Molnar Sykora Danko Jurek
Rybar Gazdik Mraz Bartos Holub Kopecky Simek Tomek Vavra Zajac""".split()

KINGS = ["Bhumibol Adulyadej", "Andrej Kiska", "Peter Sagan"]

ORGS = [
    "Comenius University", "Charles University", "Skoda Auto", "Tatra Banka", "Slovan Bratislava",
    "Sparta Prague", "Nordic Steel", "Danube Shipping", "Carpathian Mining", "Baltic Airlines",
    "Alpine Energy", "Central Railways", "Vltava Press", "Orava Textiles", "Morava Glass",
]

TEAMS = ["Slovan Bratislava", "Sparta Prague", "Rapid Vienna", "Ferencvaros Budapest", "Legia Warsaw"]

RIVERS = [("Danube", "Slovakia"), ("Danube", "Austria"), ("Danube", "Hungary"), ("Vltava", "Czechia"),
          ("Rhine", "Germany"), ("Elbe", "Germany"), ("Elbe", "Czechia"), ("Tisza", "Hungary"),
          ("Vistula", "Poland"), ("Nile", "Egypt"), ("Amazon", "Brazil"), ("Amazon", "Peru"),
          ("Mekong", "Vietnam"), ("Mekong", "Thailand"), ("Morava", "Czechia"), ("Hron", "Slovakia"),
          ("Vah", "Slovakia"), ("Oder", "Poland"), ("Seine", "France"), ("Tagus", "Portugal"), ("Tagus", "Spain")]

ROLES = ["president", "king", "queen", "prince", "emperor", "chancellor", "minister", "prime minister",
         "mayor", "governor", "leader", "ruler"]

PROFESSIONS = ["writer", "painter", "singer", "scientist", "composer", "poet", "actor", "inventor",
               "engineer", "director"]


def person_names(rng, count):
    names = set()
    while len(names) < count:
        names.add(f"{rng.choice(FIRST)} {rng.choice(LAST)}")
    return sorted(names)


def gazetteer_rows(people):
    rows = []
    for country, capital, continent in COUNTRIES:
        rows += [(country, "ner", "location"), (country, "gkg", "country"), (country, "sst", "country")]
        rows += [(capital, "ner", "location"), (capital, "gkg", "city"), (capital, "sst", "city")]
    for continent in sorted({c for _, _, c in COUNTRIES}):
        rows += [(continent, "ner", "location"), (continent, "gkg", "continent")]
    for name in sorted(set(people + KINGS)):
        rows += [(name, "ner", "person"), (name, "gkg", "person")]
    for org in ORGS + TEAMS:
        if any(r[0] == org for r in rows):
            continue
        rows += [(org, "ner", "organization"), (org, "gkg", "organization")]
    for river in sorted({r for r, _ in RIVERS}):
        rows += [(river, "ner", "location"), (river, "gkg", "river")]
    for role in ROLES:
        rows.append((role, "sst", "role"))
    for word in ["capital", "city", "country", "region"]:
        rows.append((word, "sst", "place"))
    for word in PROFESSIONS:
        rows.append((word, "sst", "person"))
    return rows


# ---------------------------------------------------------------------------
# Training pairs

def templates(rng, people):
    country, capital, continent = rng.choice(COUNTRIES)
    person = rng.choice(people)
    year = str(rng.randint(1820, 2015))
    org = rng.choice(ORGS)
    team = rng.choice(TEAMS)
    river, river_country = rng.choice(RIVERS)
    role = rng.choice(["president", "king", "queen", "leader", "ruler", "mayor"])
    profession = rng.choice(PROFESSIONS)
    millions = str(rng.randint(2, 90))
    return [
        (f"{capital} is the capital of {country}.", f"What is the capital of {country}?", capital),
        (f"The capital of {country} is {capital}.", f"What is the capital of {country}?", capital),
        (f"The capital of {country} is {capital}.", f"Where is {capital}?", f"in {country}"),
        (f"The {role} of {country} is {person}.", f"Who is the {role} of {country}?", person),
        (f"{person} was the {role} of {country}.", f"Who was the {role} of {country}?", person),
        (f"{person} comes from {country}.", f"Where does {person} come from?", f"from {country}"),
        (f"{person} was born in {year}.", f"When was {person} born?", year),
        (f"{person} was born in {capital}.", f"Where was {person} born?", f"in {capital}"),
        (f"{person} founded {org} in {year}.", f"When did {person} found {org}?", year),
        (f"{person} founded {org} in {year}.", f"Who founded {org} in {year}?", person),
        (f"The {river} flows through {river_country}.", f"Which river flows through {river_country}?", river),
        (f"{org} is located in {capital}.", f"Where is {org} located?", f"in {capital}"),
        (f"{person} lives in {capital}.", f"Where does {person} live?", f"in {capital}"),
        (f"The population of {country} is about {millions} million.",
         f"What is the population of {country}?", f"about {millions} million"),
        (f"{person} played for {team}.", f"Which team did {person} play for?", team),
        (f"{person} is a famous {profession}.", f"Who is {person}?", f"a famous {profession}"),
        (f"{country} is a country in {continent}.", f"Where is {country}?", f"in {continent}"),
    ]


def broken_pair(rng, people):
    country, capital, _ = rng.choice(COUNTRIES)
    person = rng.choice(people)
    return rng.choice([
        (f"{person} comes from {country}.", f"Tell me about {capital}", None),
        (f"The capital of {country} is {capital}.", "Name a famous river?", None),
        (f"{person} was born in {capital}.", f"Describe the history of {country}.", None),
    ])


def training_pairs(rng, people, count, broken_rate):
    pairs = []
    for i in range(count):
        if rng.random() < broken_rate:
            sentence, question, answer = broken_pair(rng, people)
        else:
            sentence, question, answer = rng.choice(templates(rng, people))
        item = {"id": f"p{i + 1:04d}", "sentence": sentence, "question": question}
        if answer is not None:
            item["answer"] = answer
        pairs.append(item)
    return pairs


def article(rng, people):
    lines = []
    for _ in range(40):
        country, capital, continent = rng.choice(COUNTRIES)
        person = rng.choice(people)
        lines.append(rng.choice([
            f"{person} was the king of {country}.",
            f"The capital of {country} is {capital}.",
            f"{person} was born in {rng.randint(1850, 2000)}.",
            f"{person} comes from {country} and {rng.choice(people)} lives in {capital}.",
            f"{capital}, which is the capital of {country}, is a large city.",
            f"{country} is a country in {continent}.",
        ]))
    return " ".join(lines) + "\n"


def write_tsv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(header)
        for row in rows:
            f.write("\t".join(row) + "\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(Path(__file__).resolve().parent.parent / "data"))
    parser.add_argument("--pairs", type=int, default=1200)
    parser.add_argument("--broken-rate", type=float, default=0.035)
    parser.add_argument("--seed", type=int, default=7)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    out = Path(args.out)
    (out / "corpus").mkdir(parents=True, exist_ok=True)
    people = person_names(rng, 120)

    write_tsv(out / "morphology.tsv", "# LEMMA\tTAG\tSURFACE\n", morphology_rows())
    write_tsv(out / "lexicon.tsv", "# WORD\tPOS\tLEMMA (_ = the word itself)\n", lexicon_rows())
    write_tsv(out / "gazetteer.tsv", "# PHRASE\tLAYER\tLABEL (lowercase phrases match any case)\n",
              gazetteer_rows(people))

    with open(out / "corpus" / "train_pairs.jsonl", "w", encoding="utf-8", newline="\n") as f:
        for item in training_pairs(rng, people, args.pairs, args.broken_rate):
            f.write(json.dumps(item, ensure_ascii=False) + "\n")
    with open(out / "corpus" / "articles.txt", "w", encoding="utf-8", newline="\n") as f:
        f.write(article(rng, people))


if __name__ == "__main__":
    main()
