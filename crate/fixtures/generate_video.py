"""Regenerates fixtures/video/: a synthetic 12-minute science video with
its transcript, metadata and 380 time-synced comments. Deterministic."""

import json
import random
from pathlib import Path
from xml.sax.saxutils import escape

OUT = Path(__file__).parent / "video"
VIDEO_ID = "BV1fx7sci001"
LINE_SECS = 6.0
LINES_PER_TOPIC = 20

TOPICS = [
    {
        "lines": [
            "Peas, beans and clover belong to the legume family.",
            "Dig up a legume and you will find small round nodules on its roots.",
            "Each nodule is a swelling of root tissue packed with living cells.",
            "Farmers noticed these nodules on legume roots long ago.",
            "A healthy legume root can carry hundreds of nodules.",
        ],
        "terms": ["nodules", "legume", "roots"],
        "concept": ["Root nodules.", "legume family", "nodules!!"],
        "inquiry": ["why do only legumes get nodules?", "are the nodules harmful to the roots?"],
        "positive": ["the close-up of the nodules is amazing", "love how clear the legume root footage is"],
        "neutral": ["so the nodules are part of the root itself", "basically every legume root has nodules"],
        "negative": ["the nodule picture is misleading, they are not seeds"],
        "experience": ["my grandpa grew peas and i remember the little nodules on the roots"],
        "supplement": ["fun fact: peanuts are legumes too, not nuts"],
    },
    {
        "lines": [
            "Inside the nodules live bacteria called rhizobia.",
            "Rhizobia enter the root through tiny hairs on its surface.",
            "The plant and the rhizobia exchange chemical signals first.",
            "Only the right rhizobia strain is allowed inside the root.",
            "This partnership between plant and rhizobia is a symbiosis.",
        ],
        "terms": ["rhizobia", "symbiosis", "bacteria"],
        "concept": ["Rhizobia.", "symbiosis", "原来是根瘤菌"],
        "inquiry": ["how does the plant recognise the rhizobia?", "where do rhizobia live before they find a root?"],
        "positive": ["the signal exchange between plant and rhizobia is brilliant"],
        "neutral": ["so the plant basically chooses its bacteria", "this means rhizobia need the plant to grow"],
        "negative": ["calling rhizobia parasites is wrong, it is a symbiosis"],
        "experience": ["i used to study rhizobia in my lab and they grow slowly"],
        "supplement": ["actually rhizobia can also live freely in the soil"],
    },
    {
        "lines": [
            "The rhizobia use an enzyme called nitrogenase.",
            "Nitrogenase breaks the triple bond of nitrogen gas from the air.",
            "The enzyme turns nitrogen into ammonia that the plant can use.",
            "Oxygen destroys nitrogenase, so the nodule must keep oxygen low.",
            "Leghemoglobin binds oxygen and gives the nodule its pink colour.",
        ],
        "terms": ["nitrogenase", "enzyme", "oxygen", "leghemoglobin"],
        "concept": ["Nitrogenase.", "leghemoglobin", "N2 to NH3"],
        "inquiry": ["why does oxygen destroy nitrogenase?", "what is leghemoglobin made of?"],
        "positive": ["the way leghemoglobin protects the enzyme is elegant"],
        "neutral": ["so the pink colour comes from leghemoglobin", "essentially the enzyme breaks the triple bond"],
        "negative": ["the oxygen animation is confusing"],
        "experience": ["i remember cutting a nodule in class and it was pink inside"],
        "supplement": ["by the way leghemoglobin is related to our hemoglobin"],
    },
    {
        "lines": [
            "Industry makes ammonia with the Haber process.",
            "The Haber process combines nitrogen and hydrogen at high pressure.",
            "It needs temperatures of around four hundred degrees.",
            "The Haber process uses a large share of the world's natural gas.",
            "Most synthetic fertilizer starts in a Haber process plant.",
        ],
        "terms": ["haber", "ammonia", "pressure"],
        "concept": ["Haber process", "Haber-Bosch", "NH3"],
        "inquiry": ["why does the Haber process need such high pressure?", "how much energy does a Haber plant use?"],
        "positive": ["the Haber process is one of the greatest inventions, genius"],
        "neutral": ["so bacteria do at room temperature what the factory does at four hundred degrees"],
        "negative": ["the energy numbers for the Haber process are inaccurate"],
        "experience": ["my father worked at an ammonia plant and the noise was terrible"],
        "supplement": ["fun fact: Fritz Haber won the Nobel prize in 1918"],
    },
    {
        "lines": [
            "Too much fertilizer washes from fields into rivers.",
            "The extra nutrients feed algae blooms in lakes and coastal water.",
            "When the algae die, decay uses up the oxygen in the water.",
            "These dead zones can no longer support fish.",
            "Runoff from fertilizer is a growing problem for rivers worldwide.",
        ],
        "terms": ["fertilizer", "algae", "runoff"],
        "concept": ["dead zones", "eutrophication", "algae bloom"],
        "inquiry": ["can the dead zones recover?", "how far does the runoff travel down the river?"],
        "positive": ["great explanation of the dead zones"],
        "neutral": ["so using legumes could reduce the runoff", "this means fertilizer should be used carefully"],
        "negative": ["sad to see the dead zones growing every year", "unfortunately farmers rarely change"],
        "experience": ["when i was a kid our lake turned green every summer from the algae"],
        "supplement": ["historically the Gulf of Mexico dead zone is one of the largest"],
    },
    {
        "lines": [
            "Farmers rotate crops to keep the soil fertile.",
            "A year of clover or beans leaves nitrogen in the soil.",
            "Wheat planted after beans needs less fertilizer.",
            "Crop rotation was used in Europe long before chemistry explained it.",
            "Rotation with legumes is still a cheap way to feed the soil.",
        ],
        "terms": ["rotation", "soil", "wheat"],
        "concept": ["crop rotation", "Norfolk rotation", "four-field system"],
        "inquiry": ["does rotation work for rice as well?", "how many years should the clover stay?"],
        "positive": ["rotation is such a smart idea, old farmers were brilliant"],
        "neutral": ["so the clover basically fertilizes the next crop", "because of this farmers plant beans before wheat"],
        "negative": ["the claim that rotation replaces all fertilizer is misleading"],
        "experience": ["my dad is a farmer and he rotates alfalfa every few years"],
        "supplement": ["actually the Norfolk four-course rotation dates from the 1700s"],
    },
]

NOISE = ["233333", "hahaha", "前排", "awsl", "lol", "打卡", "666666", "???", "来了来了", "hello everyone", "the music is nice", "hi mom"]
CATEGORIES = ["concept", "inquiry", "positive", "neutral", "negative", "experience", "supplement"]
WEIGHTS = [3, 3, 3, 4, 1, 1, 1]
SUFFIXES = ["", "", "!", "!!", " lol"]


def transcript():
    lines = []
    for ti, topic in enumerate(TOPICS):
        for j in range(LINES_PER_TOPIC):
            lines.append(topic["lines"][j % len(topic["lines"])])
    return lines


def srt_time(t):
    ms = int(round(t * 1000))
    h, ms = divmod(ms, 3_600_000)
    m, ms = divmod(ms, 60_000)
    s, ms = divmod(ms, 1000)
    return f"{h:02}:{m:02}:{s:02},{ms:03}"


def main():
    rng = random.Random(20240917)
    OUT.mkdir(exist_ok=True)
    lines = transcript()
    duration = len(lines) * LINE_SECS
    with open(OUT / "transcript.srt", "w", encoding="utf-8") as f:
        for i, text in enumerate(lines):
            start = i * LINE_SECS
            f.write(f"{i + 1}\n{srt_time(start)} --> {srt_time(start + LINE_SECS - 0.5)}\n{text}\n\n")
    meta = {"video_id": VIDEO_ID, "title": "How beans make their own fertilizer", "duration": duration, "domain_tag": "biology"}
    (OUT / "meta.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")

    topic_secs = LINES_PER_TOPIC * LINE_SECS
    comments = []
    for n in range(380):
        if rng.random() < 0.15:
            text = rng.choice(NOISE)
            t = rng.uniform(0, duration)
        else:
            ti = rng.randrange(len(TOPICS))
            cat = rng.choices(CATEGORIES, WEIGHTS)[0]
            text = rng.choice(TOPICS[ti][cat]) + rng.choice(SUFFIXES)
            # viewers react a few seconds after the content
            t = min(ti * topic_secs + rng.uniform(0, topic_secs) + rng.expovariate(1 / 4), duration)
        comments.append((round(t, 3), text))
    with open(OUT / "danmaku.xml", "w", encoding="utf-8") as f:
        f.write('<?xml version="1.0" encoding="UTF-8"?>\n<i>\n')
        f.write(f"  <chatid>{VIDEO_ID}</chatid>\n")
        for rowid, (t, text) in enumerate(comments, start=1):
            mode = rng.choice([1, 1, 1, 4, 5])
            color = rng.choice([16777215, 16777215, 16744192, 65280])
            posted = 1_700_000_000 + rng.randrange(0, 3_000_000)
            user = f"{rng.getrandbits(32):08x}"
            f.write(f'  <d p="{t},{mode},25,{color},{posted},0,{user},{rowid}">{escape(text)}</d>\n')
        f.write("</i>\n")


if __name__ == "__main__":
    main()
