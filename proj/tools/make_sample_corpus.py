#!/usr/bin/env python3
"""Regenerates data/sample_corpus.jsonl.

Synthetic news-style articles: each article mixes four or five topics, each
topic has its own vocabulary, and consecutive sentences tend to stay on the
same topic the way paragraphs do. A handful of hand-written articles are
appended as raw text so the loader's sentence splitter is exercised too.

The output is fully determined by --seed.
"""

import argparse
import json
import random

TOPICS = {
    "elections": (
        "ballot voters candidate campaign polls district turnout senate primary coalition".split(),
        "campaigned conceded voted endorsed tallied".split(),
        "narrow contested early regional".split(),
        ["Governor Alvarez", "the electoral commission", "Senator Okafor"],
    ),
    "budget": (
        "budget deficit spending taxes revenue treasury surplus audit pension bonds".split(),
        "approved trimmed borrowed forecast audited".split(),
        "fiscal annual municipal austere".split(),
        ["the finance ministry", "Treasurer Lindqvist", "the budget office"],
    ),
    "football": (
        "striker goalkeeper match league penalty coach stadium season fans transfer".split(),
        "scored defended substituted equalised trained".split(),
        "decisive injured promoted dramatic".split(),
        ["United", "coach Moretti", "the national side"],
    ),
    "tennis": (
        "serve racket tournament semifinal rally tiebreak seed court grass title".split(),
        "served broke retired saved volleyed".split(),
        "unseeded fifth straight gruelling".split(),
        ["Nadia Petrova", "the top seed", "Wimbledon"],
    ),
    "climate": (
        "emissions carbon warming glaciers drought temperatures heatwave sea ice methane".split(),
        "melted warmed measured rose thawed".split(),
        "record arctic global extreme".split(),
        ["climate scientists", "the UN panel", "Greenland"],
    ),
    "space": (
        "rocket launch orbit satellite astronauts capsule lunar probe mission telescope".split(),
        "launched docked orbited landed deployed".split(),
        "reusable lunar crewed deep".split(),
        ["the space agency", "mission control", "the orbital station"],
    ),
    "health": (
        "vaccine hospital patients doctors virus infections clinic nurses trial dose".split(),
        "vaccinated admitted treated recovered tested".split(),
        "clinical seasonal booster intensive".split(),
        ["health officials", "Dr Chen", "the regional hospital"],
    ),
    "tech": (
        "software smartphone chip startup algorithm app servers cloud data users".split(),
        "released acquired patched encrypted upgraded".split(),
        "open mobile faster artificial".split(),
        ["the startup", "chief engineer Patel", "the chipmaker"],
    ),
    "markets": (
        "shares stocks investors index earnings dividend bonds inflation rates trading".split(),
        "rallied slumped traded priced rebounded".split(),
        "quarterly volatile bullish cautious".split(),
        ["the central bank", "analysts", "the stock exchange"],
    ),
    "crime": (
        "police suspect robbery arrest detectives evidence court jury sentence witness".split(),
        "arrested charged convicted testified investigated".split(),
        "armed alleged violent undercover".split(),
        ["detectives", "the prosecutor", "Judge Harlow"],
    ),
    "weather": (
        "storm rain flooding winds forecast snow hurricane thunder gusts rivers".split(),
        "flooded battered swept drenched warned".split(),
        "heavy torrential severe coastal".split(),
        ["forecasters", "the met office", "coastal towns"],
    ),
    "education": (
        "students teachers school exams curriculum university tuition classrooms grades scholarship".split(),
        "graduated enrolled taught studied passed".split(),
        "primary secondary academic remote".split(),
        ["the teachers union", "the university", "headteacher Boyd"],
    ),
    "music": (
        "album concert singer band tour guitar chart lyrics festival stage".split(),
        "performed recorded toured sang headlined".split(),
        "acoustic debut sold out live".split(),
        ["the band", "singer Maya Ross", "the festival organisers"],
    ),
    "film": (
        "film director actor screenplay premiere box office studio sequel cast award".split(),
        "filmed directed premiered starred grossed".split(),
        "animated indie blockbuster critically".split(),
        ["the studio", "director Okoye", "the festival jury"],
    ),
    "farming": (
        "farmers harvest crops wheat cattle soil irrigation fertiliser yields drought".split(),
        "harvested planted irrigated grazed sowed".split(),
        "organic rural bumper arable".split(),
        ["farmers", "the agriculture ministry", "the cooperative"],
    ),
    "transport": (
        "railway trains commuters tram buses tickets timetable station signal fares".split(),
        "delayed cancelled derailed electrified rerouted".split(),
        "suburban high speed overcrowded night".split(),
        ["the rail operator", "commuters", "transport minister Varga"],
    ),
    "aviation": (
        "airline flights passengers airport runway pilots cabin jet fuel luggage".split(),
        "grounded diverted landed boarded refuelled".split(),
        "budget long haul delayed chartered".split(),
        ["the airline", "air traffic control", "the aviation regulator"],
    ),
    "housing": (
        "housing rents mortgage tenants landlords apartments construction planning homes prices".split(),
        "built rented evicted mortgaged renovated".split(),
        "affordable social luxury vacant".split(),
        ["the housing board", "tenants", "developers"],
    ),
    "energy": (
        "solar wind turbines grid electricity coal gas nuclear reactor batteries".split(),
        "generated installed powered connected decommissioned".split(),
        "renewable offshore cheaper peak".split(),
        ["the grid operator", "the energy regulator", "the utility"],
    ),
    "diplomacy": (
        "treaty summit ambassador talks sanctions ceasefire delegation embassy negotiations accord".split(),
        "negotiated signed mediated condemned ratified".split(),
        "bilateral fragile historic multilateral".split(),
        ["the foreign minister", "envoys", "the UN security council"],
    ),
    "military": (
        "troops soldiers border drills missiles navy tanks defence convoy base".split(),
        "deployed patrolled withdrew mobilised intercepted".split(),
        "joint naval armoured strategic".split(),
        ["the defence ministry", "General Ruiz", "allied forces"],
    ),
    "wildlife": (
        "elephants poachers habitat species rangers reserve forest tigers conservation migration".split(),
        "tracked protected relocated poached sighted".split(),
        "endangered wild rare protected".split(),
        ["rangers", "the wildlife trust", "conservationists"],
    ),
    "oceans": (
        "reef fishing coral plastic whales trawlers fisheries currents divers tides".split(),
        "fished bleached surveyed netted dived".split(),
        "marine deep bleached coastal".split(),
        ["marine biologists", "the fisheries agency", "divers"],
    ),
    "food": (
        "restaurant chef menu recipe dishes kitchen diners ingredients bakery wine".split(),
        "cooked served baked tasted opened".split(),
        "seasonal spicy local michelin".split(),
        ["the chef", "food critics", "the bakery"],
    ),
    "retail": (
        "shoppers stores sales discounts retailers online checkout inventory mall brands".split(),
        "discounted stocked shopped closed expanded".split(),
        "holiday online independent struggling".split(),
        ["retailers", "the shopping centre", "consumers"],
    ),
    "labour": (
        "workers union strike wages pay shifts picket employers contract overtime".split(),
        "striked bargained walked out unionised negotiated".split(),
        "minimum industrial fair collective".split(),
        ["the union", "employers", "union leader Quinn"],
    ),
    "science": (
        "researchers experiment laboratory particles genome microscope physics molecules hypothesis journal".split(),
        "discovered published sequenced observed replicated".split(),
        "peer reviewed quantum genetic novel".split(),
        ["the researchers", "the laboratory", "Professor Adeyemi"],
    ),
    "art": (
        "gallery painting exhibition sculpture museum curator canvas collectors auction artist".split(),
        "exhibited painted auctioned restored curated".split(),
        "abstract contemporary renaissance priceless".split(),
        ["the museum", "the curator", "collectors"],
    ),
    "fires": (
        "wildfire firefighters blaze smoke evacuation acres embers helicopters brush containment".split(),
        "burned evacuated contained spread extinguished".split(),
        "uncontrolled dry charred windy".split(),
        ["firefighters", "the fire service", "hill villages"],
    ),
    "water": (
        "reservoir water pipes drought supply leaks rationing dam aquifer treatment".split(),
        "rationed piped leaked pumped restored".split(),
        "drinking dwindling municipal clean".split(),
        ["the water authority", "engineers", "residents"],
    ),
    "cycling": (
        "cyclists peloton stage sprint mountain jersey team climb descent breakaway".split(),
        "sprinted attacked climbed crashed won".split(),
        "yellow alpine final gruelling".split(),
        ["the race leader", "team Sky", "the peloton"],
    ),
    "courts": (
        "supreme court ruling appeal judges constitution lawsuit verdict justices petition".split(),
        "ruled appealed upheld overturned dismissed".split(),
        "landmark unanimous constitutional narrow".split(),
        ["the supreme court", "Justice Amari", "the appeals panel"],
    ),
    "tourism": (
        "tourists hotels visitors beaches resorts bookings cruise guides museums visas".split(),
        "visited booked cruised toured welcomed".split(),
        "summer record foreign peak".split(),
        ["the tourism board", "hoteliers", "visitors"],
    ),
    "auto": (
        "cars electric vehicles factory engines recall dealers batteries emissions models".split(),
        "manufactured recalled assembled charged unveiled".split(),
        "electric hybrid autonomous compact".split(),
        ["the carmaker", "dealers", "regulators"],
    ),
    "religion": (
        "church pilgrims cathedral bishop congregation festival prayer temple clergy worshippers".split(),
        "prayed gathered blessed worshipped celebrated".split(),
        "ancient holy annual sacred".split(),
        ["the bishop", "pilgrims", "the congregation"],
    ),
    "gaming": (
        "gamers console players esports tournament studio servers patch characters levels".split(),
        "streamed patched downloaded competed launched".split(),
        "multiplayer online indie competitive".split(),
        ["the game studio", "players", "esports fans"],
    ),
}

TEMPLATES = [
    "{E} said the {a} {n1} {v} after the {n2} was reviewed.",
    "The {n1} {v} as {n2} and {n3} drew attention from {E}.",
    "According to {E}, the {a} {n1} {v} the {n2} this week.",
    "Officials noted that the {n1} {v} while the {n2} remained {a}.",
    "{E} {v} the {n1} and pointed to the {a} {n2}.",
    "Many {n1} were {a} after the {n2} {v} near the {n3}.",
    "The {a} {n1} has {v} the {n2} for the first time.",
    "Critics of the {n1} argued that the {n2} {v} too slowly.",
    "A spokesperson for {E} confirmed the {n1} {v} on Tuesday.",
    "Behind the {n1}, the {a} {n2} and {n3} {v} once again.",
]

BRIDGES = [
    "The {n1} also {v} the {m1}, linking the two issues.",
    "Observers said the {a} {n1} could affect the {m1} as well.",
    "{E} connected the {n1} to the {m1} in a statement.",
]

FILLER = [
    "More details are expected later this week.",
    "It was not immediately clear what happens next.",
    "The announcement came late on Monday evening.",
    "Reporters were told to expect a further update.",
    "Several people declined to comment on the record.",
]

CURATED = [
    {
        "id": "curated-harbour-bridge",
        "text": (
            "The city council voted on Tuesday to repair the old harbour bridge. "
            "Engineers from the U.S. firm hired last spring said the steel was corroded. "
            "Dr. Amelia Ward, who led the inspection, called the damage serious but fixable. "
            "Repairs will close two of the four lanes for at least eight months. "
            "Commuters who cross the bridge each morning face long delays. "
            "The ferry operator said it would add extra boats during rush hour. "
            "Council members argued for hours about the $42.5 million price. "
            "Some wanted to build a new tunnel instead. "
            "Others said a tunnel would take a decade and cost three times as much. "
            "In the end the repair plan passed by nine votes to four. "
            "Work is expected to start in early March. "
            "Local shops near the bridge worry about losing customers during the closure."
        ),
    },
    {
        "id": "curated-orchard-frost",
        "text": (
            "A late frost has damaged apple orchards across the northern valley. "
            "Growers said temperatures fell to minus four degrees overnight. "
            "Blossoms that opened early in the warm spring were the worst hit. "
            "Mr. Halvorsen, whose family has farmed the valley for three generations, lost most of his crop. "
            "He said he had never seen frost this late in the season. "
            "Insurance covers only part of the losses for most farms. "
            "The growers association has asked the government for emergency aid. "
            "Apple prices in supermarkets are likely to rise by autumn. "
            "Cider makers in the region are already looking for fruit abroad. "
            "Scientists say warmer winters make orchards bloom earlier and more vulnerable to frost. "
            "Some farmers are now testing wind machines that mix warmer air into the orchards."
        ),
    },
    {
        "id": "curated-library-reopens",
        "text": (
            "The central library reopened on Saturday after a two-year renovation. "
            "Hundreds of readers queued outside before the doors opened at 9 a.m. on the first day. "
            "The building now has a rooftop reading garden and a new children's wing. "
            "Architects kept the original marble staircase from 1912. "
            "Solar panels on the roof will supply about a third of its electricity. "
            "The renovation cost $18 million, most of it from a city bond. "
            "Librarians said the collection had grown to more than 400,000 books. "
            "A digital archive lets visitors read rare newspapers on touch screens. "
            "Opening hours have been extended to ten o'clock on weeknights. "
            "The mayor said the library was the heart of the neighbourhood. "
            "Next month the library will host a festival for local writers."
        ),
    },
    {
        "id": "curated-marathon",
        "text": (
            "Kenyan runner Grace Mutua won the city marathon on Sunday in record time. "
            "She finished in two hours, eighteen minutes and nine seconds. "
            "The previous course record had stood for eleven years. "
            "Mutua broke away from the leading group at the 30-kilometre mark. "
            "Her training partner finished second, almost a minute behind. "
            "In the men's race, the defending champion dropped out with a leg injury. "
            "An Ethiopian newcomer took the men's title in a sprint finish. "
            "More than 30,000 runners took part, a record for the event. "
            "Organisers handed out extra water because of the unusual heat. "
            "Paramedics treated dozens of runners for exhaustion near the finish line. "
            "Mutua said she would now focus on the world championships in August. "
            "She dedicated the win to her coach, who died last year."
        ),
    },
    {
        "id": "curated-museum-theft",
        "text": (
            "Thieves stole three paintings from a small coastal museum overnight. "
            "Police said the burglars entered through a skylight shortly after 2 a.m. and disabled an alarm. "
            "The missing works include a seascape valued at about $2 million. "
            "The museum's director, Prof. Ines Almeida, said staff were heartbroken. "
            "Investigators are studying footage from cameras on nearby streets. "
            "A van was seen leaving the area at high speed. "
            "Art recovery experts said stolen paintings are very hard to sell openly. "
            "Such works often disappear for years before resurfacing. "
            "The museum will stay closed while detectives examine the building. "
            "Insurance experts said the pieces were underinsured. "
            "Residents have started a fund to improve security at the museum."
        ),
    },
    {
        "id": "curated-river-cleanup",
        "text": (
            "Volunteers pulled nearly four tonnes of rubbish from the river this weekend. "
            "The clean-up was organised by a group of local schools and a rowing club. "
            "Shopping trolleys, tyres and a rusted motorbike were among the finds. "
            "Plastic bottles made up most of the waste by volume. "
            "Water quality in the river has improved over the past decade. "
            "Otters have returned to the upper stretches for the first time since the 1970s. "
            "Environmental officers still warn against swimming after heavy rain. "
            "Sewage overflows remain a problem in older parts of the city. "
            "The water company has promised to upgrade its storm tanks by 2028. "
            "Campaigners say the deadline is too slow. "
            "Organisers hope to hold a clean-up every season from now on. "
            "Students who took part will test water samples in their science classes."
        ),
    },
]


def pick(rng, items, k):
    return rng.sample(items, k)


def topic_sentence(rng, topic):
    nouns, verbs, adjs, ents = TOPICS[topic]
    n1, n2, n3 = pick(rng, nouns, 3)
    return rng.choice(TEMPLATES).format(
        n1=n1, n2=n2, n3=n3, v=rng.choice(verbs), a=rng.choice(adjs), E=rng.choice(ents)
    )


def bridge_sentence(rng, topic, other):
    nouns, verbs, adjs, ents = TOPICS[topic]
    m1 = rng.choice(TOPICS[other][0])
    return rng.choice(BRIDGES).format(
        n1=rng.choice(nouns), m1=m1, v=rng.choice(verbs), a=rng.choice(adjs), E=rng.choice(ents)
    )


def capitalise(s):
    return s[0].upper() + s[1:]


def synthetic_article(rng, idx, length):
    topics = rng.sample(sorted(TOPICS), rng.choice([4, 4, 5]))
    weights = [rng.uniform(0.5, 1.0) for _ in topics]
    sentences = []
    current = topics[0]
    while len(sentences) < length:
        roll = rng.random()
        if roll < 0.05:
            sentences.append(rng.choice(FILLER))
            continue
        if roll < 0.12 and len(sentences) > 0:
            other = rng.choice([t for t in topics if t != current])
            sentences.append(capitalise(bridge_sentence(rng, current, other)))
            continue
        sentences.append(capitalise(topic_sentence(rng, current)))
        # Paragraph-like persistence: stay on topic about half the time.
        if rng.random() > 0.5:
            current = rng.choices(topics, weights=weights)[0]
    return {"id": f"synthetic-{idx:04d}", "sentences": sentences}


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=20240517)
    parser.add_argument("--articles", type=int, default=210)
    parser.add_argument("--short", type=int, default=8, help="articles under 10 sentences")
    parser.add_argument("--out", default="data/sample_corpus.jsonl")
    args = parser.parse_args()

    rng = random.Random(args.seed)
    records = []
    for i in range(args.articles):
        records.append(synthetic_article(rng, i, rng.randint(10, 40)))
    for j in range(args.short):
        rec = synthetic_article(rng, args.articles + j, rng.randint(4, 9))
        records.append(rec)
    records.extend(CURATED)
    rng.shuffle(records)
    with open(args.out, "w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
