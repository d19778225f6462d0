#!/usr/bin/env python3
"""Regenerates the test fixtures. Output is deterministic.

    python3 fixtures/generate.py

Labels, cleaned text and sentence splits are known by construction, so the
golden files do not depend on the library under test.
"""

import random
from pathlib import Path

HERE = Path(__file__).resolve().parent

SUBJ3 = [("PRP", "She"), ("PRP", "He"), ("NN", "Mommy"), ("NN", "Daddy"), ("DT NN", "the dog"),
         ("DT NN", "the baby"), ("NN", "Grandma"), ("DT NN", "the cat")]
V_INTR = ["runs", "sleeps", "jumps", "cries", "laughs", "swims", "sings", "falls"]
V_TR = ["opens", "wants", "likes", "finds", "eats", "takes", "holds", "sees"]
V_BARE = ["run", "sleep", "jump", "eat", "swim", "sing", "play", "go"]
V_ING = ["running", "sleeping", "jumping", "eating", "swimming", "singing", "playing"]
NOUNS = ["bottle", "ball", "book", "cookie", "truck", "doll", "spoon", "hat", "apple", "shoe"]
ADVS = ["fast", "again", "now", "too", "there", "away", "slowly", "here"]
POSS = ["your", "her", "his", "my", "their"]
PREPS = ["with", "on", "in", "under", "near", "behind"]
PRT_VERBS = [("Cut", "off"), ("Pick", "up"), ("Put", "down"), ("Turn", "on"), ("Throw", "away"),
             ("Take", "out")]
MODALS = ["can", "should", "will", "must", "might", "could"]
SUBORD = ["because", "when", "if", "while", "before", "after"]
WH = ["what", "who"]
INTJ = ["uh", "um", "oh", "ah", "yeah", "wow"]


def np(subj):
    tags, words = subj
    pairs = zip(tags.split(), words.split())
    return "(NP " + " ".join(f"({t} {w})" for t, w in pairs) + ")"


def det_noun(r):
    return f"(NP (DT the) (NN {r.choice(NOUNS)}))"


def t_subject_verb(r):
    s = np(r.choice(SUBJ3))
    if r.random() < 0.5:
        return f"(S {s} (VP (VBZ {r.choice(V_INTR)})) (. .))"
    return f"(S {s} (VP (VBZ {r.choice(V_TR)}) {det_noun(r)}) (. .))"


def t_adverbs(r):
    s = np(r.choice(SUBJ3))
    k = r.randrange(3)
    if k == 0:
        return f"(S {s} (VP (VBZ {r.choice(V_INTR)}) (ADVP (RB {r.choice(ADVS)}))) (. .))"
    if k == 1:
        return f"(S {s} (VP (VBZ {r.choice(V_TR)}) (NP (PRP$ {r.choice(POSS)}) (NN {r.choice(NOUNS)}))) (. .))"
    return f"(S (VP (VB {r.choice(V_BARE).capitalize()}) (ADVP (RB {r.choice(ADVS)}))) (. .))"


def t_prepositions(r):
    s = np(r.choice(SUBJ3))
    return f"(S {s} (VP (VBZ {r.choice(V_INTR)}) (PP (IN {r.choice(PREPS)}) {det_noun(r)})) (. .))"


def t_particle(r):
    v, p = r.choice(PRT_VERBS)
    return f"(S (VP (VB {v}) (NP (PRP it)) (PRT (RP {p}))) (. .))"


def t_auxiliaries(r):
    s = np(r.choice(SUBJ3))
    return f"(S {s} (VP (MD {r.choice(MODALS)}) (VP (VB {r.choice(V_BARE)}))) (. .))"


def t_negation(r):
    s = np(r.choice(SUBJ3))
    neg = r.choice(["not", "n't"])
    return f"(S {s} (VP (MD {r.choice(MODALS)}) (RB {neg}) (VP (VB {r.choice(V_BARE)}))) (. .))"


def t_tense(r):
    s = np(r.choice(SUBJ3))
    return f"(S {s} (VP (VBZ is) (VP (VBG {r.choice(V_ING)}))) (. .))"


def t_embedded(r):
    if r.random() < 0.3:
        return f"(S (VP (VB Let) (S (NP (PRP 's)) (VP (VB {r.choice(V_BARE)})))) (. .))"
    s = np(r.choice(SUBJ3))
    return (f"(S (NP (PRP I)) (VP (VBP know) (SBAR (WHNP (WP {r.choice(WH)})) "
            f"(S {s} (VP (VBZ {r.choice(V_TR)}))))) (. .))")


def t_to_infinitives(r):
    return f"(S (NP (PRP I)) (VP (VBP want) (S (VP (TO to) (VP (VB {r.choice(V_BARE)}))))) (. .))"


def t_linked(r):
    a, b = np(r.choice(SUBJ3)), np(r.choice(SUBJ3))
    if r.random() < 0.5:
        return (f"(S {a} (VP (VBZ {r.choice(V_INTR)}) (SBAR (IN {r.choice(SUBORD)}) "
                f"(S {b} (VP (VBZ {r.choice(V_INTR)}))))) (. .))")
    return (f"(S (S {a} (VP (VBZ {r.choice(V_INTR)}))) (CC and) "
            f"(S {b} (VP (VBZ {r.choice(V_INTR)}))) (. .))")


def t_relative(r):
    return (f"(NP (NP (DT the) (NN {r.choice(NOUNS)})) (SBAR (WHNP (WDT that)) "
            f"(S (VP (VBZ {r.choice(V_INTR)})))))")


def t_fragments(r):
    return f"(FRAG (INTJ (UH {r.choice(INTJ)})) (, ,) {det_noun(r)})"


def t_interrogatives(r):
    k = r.randrange(3)
    if k == 0:
        return f"(SQ (VBZ Is) (NP (DT that)) (NP (DT a) (NN {r.choice(NOUNS)})) (. ?))"
    if k == 1:
        return f"(SBARQ (WHNP (WP What)) (SQ (VBZ is) {det_noun(r)}) (. ?))"
    tags, words = r.choice(SUBJ3)
    s = np((tags, words.lower() if tags == "PRP" else words))
    return (f"(SQ (VBZ Does) {s} (VP (VB know) (SBAR (WHNP (WP what)) "
            f"(S (NP (PRP it)) (VP (VBZ is))))) (. ?))")


def t_noise(r):
    k = r.randrange(3)
    if k == 0:
        return f"(S {det_noun(r)} {det_noun(r)} (VP (VBZ {r.choice(V_INTR)})) (. .))"
    if k == 1:
        return f"(UCP {det_noun(r)} (CC and) (ADJP (JJ big)))"
    return f"(X (NN {r.choice(NOUNS)}) (NN {r.choice(NOUNS)}))"


TEMPLATES = {
    "Subject-Verb": t_subject_verb,
    "Adverbs & Possessives": t_adverbs,
    "Prepositions": t_prepositions,
    "Particle verbs": t_particle,
    "Auxiliaries": t_auxiliaries,
    "Negation": t_negation,
    "Tense": t_tense,
    "Embedded clauses": t_embedded,
    "To-infinitives": t_to_infinitives,
    "Linked clauses": t_linked,
    "Relative clauses": t_relative,
    "Fragments": t_fragments,
    "Interrogatives": t_interrogatives,
}

UNCATEGORIZED = "Uncategorized"
UNPARSED = "Unparsed"


def tree_yield(tree):
    out = []
    for part in tree.replace("(", " ( ").replace(")", " ) ").split():
        out.append(part)
    tokens = []
    for i, p in enumerate(out):
        if p not in "()" and out[i - 1] != "(":
            tokens.append(p)
    return tokens


def draw(r, noise_rate, unparsed_rate):
    x = r.random()
    if x < unparsed_rate:
        label = UNPARSED
        tree = "(())"
        text = " ".join(tree_yield(TEMPLATES["Subject-Verb"](r)))
        return label, text, tree
    if x < unparsed_rate + noise_rate:
        label, tree = UNCATEGORIZED, t_noise(r)
    else:
        label = r.choice(list(TEMPLATES))
        tree = TEMPLATES[label](r)
    text = " ".join(tree_yield(tree))
    return label, text, tree


def write(path, lines):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(l + "\n" for l in lines))


def mixed(r):
    out = HERE / "mixed"
    corpora = [("CHILDES", "childes", 200), ("BNC-Spoken", "bnc", 100),
               ("Switchboard", "switchboard", 100), ("SimpleWiki", "simplewiki", 100)]
    golden = ["# corpus\tline\tlabel"]
    config = ["# 500 sentences over four corpora; CHILDES carries ages", ""]
    for corpus, slug, n in corpora:
        sentences, trees, ages = [], [], ["record_id\tmonths"]
        for i in range(n):
            label, text, tree = draw(r, 0.16, 0.02)
            sentences.append(text)
            trees.append(tree)
            golden.append(f"{corpus}\t{i + 1}\t{label}")
            if corpus == "CHILDES":
                ages.append(f"{i + 1}\t{r.randrange(6, 96)}")
        write(out / f"{slug}.txt", sentences)
        write(out / f"{slug}.trees", trees)
        config += ["[[input]]", f'corpus = "{corpus}"', f'sentences = "{slug}.txt"', f'trees = "{slug}.trees"']
        if corpus == "CHILDES":
            write(out / f"{slug}.ages.tsv", ages)
            config.append(f'ages = "{slug}.ages.tsv"')
        config.append("")
    write(out / "golden.tsv", golden)
    (out / "run.toml").write_text("\n".join(config))


def curriculum(r):
    out = HERE / "curriculum"
    sentences, trees = [], []
    for _ in range(1000):
        _, text, tree = draw(r, 0.08, 0.02)
        sentences.append(text)
        trees.append(tree)
    write(out / "sentences.txt", sentences)
    write(out / "trees.txt", trees)


# CHAT cleanup: each raw line is built from clean words plus inserted
# annotations; the expected output is the clean words.
CHAT_WORDS = ["look", "at", "the", "doggie", "I", "want", "more", "juice", "where", "is", "ball",
              "you", "did", "it", "mommy", "go", "night", "night", "big", "truck", "yes", "no"]
CHAT_NOISE = ["[!]", "[/]", "[//]", "[: ball]", "[= points]", "[?]", "&-um", "&-uh", "&+fr",
              "&=laughs", "xxx", "yyy", "www", "+...", "+/."]
SPEAKERS = ["*MOT:", "*CHI:", "*FAT:", "*INV:"]


def childes(r):
    out = HERE / "prep"
    raw, expected, ages = [], [], ["record_id\tmonths"]
    for i in range(200):
        words = [r.choice(CHAT_WORDS) for _ in range(r.randrange(0, 6))]
        parts = []
        for w in words:
            if r.random() < 0.25:
                parts.append(r.choice(CHAT_NOISE))
            if r.random() < 0.15:
                parts.append(w + r.choice(["@d", "@c", "@o"]))
            elif r.random() < 0.1:
                parts.append("<" + w + ">")
            else:
                parts.append(w)
        if r.random() < 0.3:
            parts.append(r.choice(CHAT_NOISE))
        end = r.choice([".", "?", "!"])
        spacing = " " * r.randrange(1, 3)
        line = r.choice(SPEAKERS) + "\t" + spacing.join(parts + [end])
        raw.append(line)
        expected.append(" ".join(words + [end]))
        ages.append(f"{i + 1}\t{r.randrange(10, 80)}")
    write(out / "childes.cha", raw)
    write(out / "childes.expected.txt", expected)
    write(out / "childes.ages.tsv", ages)


SEG_SENTENCES = ["She runs fast.", "Where is my hat?", "Stop it!", "Mr. Brown came home.",
                 "It costs 3.50 dollars.", "We met Dr. Lee today.", "Wait...", "Is it done?",
                 "The cat sat on the mat.", "\"Go away.\"", "I know.", "Look at that!",
                 "They left at 5 p.m. yesterday.", "Really?!", "Good night."]


def segmentation(r):
    out = HERE / "prep"
    rows = ["# input\texpected sentences separated by ' || '"]
    for _ in range(100):
        chosen = [r.choice(SEG_SENTENCES) for _ in range(r.randrange(1, 4))]
        rows.append(" ".join(chosen) + "\t" + " || ".join(chosen))
    write(out / "segmentation.tsv", rows)


SUBTITLE_LINES = ["- Where are you going?", "- Home.", "JOHN: I told you already.",
                  "MARY: Did you? I forgot.", "- Okay. Fine.", "Hello there.", "Yes",
                  "A: yeah I know what you mean", "B: right", "- JACK: Come on!"]


def subtitles(r):
    out = HERE / "prep"
    write(out / "subtitles.txt", [r.choice(SUBTITLE_LINES) for _ in range(60)])


def main():
    r = random.Random(20240417)
    mixed(r)
    curriculum(r)
    childes(r)
    segmentation(r)
    subtitles(r)


if __name__ == "__main__":
    main()
