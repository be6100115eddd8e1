#!/usr/bin/env python3
# Copyright 2026 The Rhetoric Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes the excerpt fixture corpora, rule sets and golden tables.

The golden tables come from a standalone reimplementation of the counting
rules (normalization, whole-token lexicon matching, pool filtering, campaign
window) and never call the C++ code. Rerun after editing the excerpts:

    python3 tests/fixtures/generate.py
"""

import csv
import datetime
import io
import json
import pathlib
import string

HERE = pathlib.Path(__file__).resolve().parent
DATA = HERE.parent.parent / "data"

PARTY = {
    "Donald Trump": "R", "Joe Biden": "D", "Hillary Clinton": "D",
    "Gerald Ford": "R", "Jimmy Carter": "D", "George Bush": "R",
    "Barack Obama": "D", "Ronald Reagan": "R", "John McCain": "R",
    "John Kerry": "D", "Moderator": "O",
}

# (doc_id, date, title, [(speaker, sentence), ...])
DEBATES = [
    ("debate-2020-1a", "2020-09-29", "First 2020 presidential debate", [
        ("Joe Biden", "I'm talking about the Biden plan. . ."),
        ("Donald Trump", "Where they want to rip down buildings. . ."),
        ("Moderator", "[to Biden] Let him go for a minute, and then you can go."),
        ("Donald Trump", "And rebuild the building."),
        ("Joe Biden", "No."),
        ("Donald Trump", "It's the dumbest-"),
        ("Joe Biden", "That is not, that is not. . ."),
        ("Donald Trump", "... most ridiculous. . ."),
    ]),
    ("debate-2020-1b", "2020-09-29", "First 2020 presidential debate", [
        ("Joe Biden", "Russia is paying you a lot."),
        ("Joe Biden", "China is paying a lot."),
        ("Joe Biden", "And your hotels and all your businesses all around the country, all around the world."),
        ("Joe Biden", "And China's building a new road to a new gas  a golf course you have overseas."),
        ("Joe Biden", "So what's going on here?"),
        ("Joe Biden", "Why don't you release your tax return or stop talking about corruption?"),
    ]),
    ("debate-2020-1c", "2020-09-29", "First 2020 presidential debate", [
        ("Donald Trump", "We have to go back to the core values of this country."),
        ("Donald Trump", "They were teaching people that our country is a horrible place."),
        ("Donald Trump", "It's a racist place."),
        ("Donald Trump", "And they were teaching people to hate our country."),
        ("Donald Trump", "And I'm not going to allow that to happen."),
        ("Joe Biden", "Nobody's doing that."),
        ("Moderator", "Vice President Biden."),
        ("Joe Biden", "Nobody's doing that."),
        ("Joe Biden", "He's the racist."),
    ]),
    ("debate-2020-2", "2020-10-22", "Final 2020 presidential debate", [
        ("Donald Trump", "I mean, they can say anything."),
        ("Donald Trump", "It's a very-- it makes me sad because I am the least racist person."),
        ("Donald Trump", "I can't even see the audience because it's so dark, but I don't care who's in the audience."),
        ("Donald Trump", "I'm the least racist person in this room."),
        ("Moderator", "OK."),
        ("Moderator", "Vice President Biden, let me ask you, very quickly, and then I have a follow up question for you."),
        ("Joe Biden", "Abraham Lincoln."),
        ("Joe Biden", "Here is one of the most racist presidents we've had in modern history."),
        ("Joe Biden", "He pours fuel on every single racist fire, every single one."),
    ]),
    ("debate-2016-3a", "2016-10-19", "Third 2016 presidential debate", [
        ("Donald Trump", "Well, all of these bad leaders from ISIS are leaving Mosul."),
        ("Donald Trump", "Why can't they do it quietly?"),
        ("Donald Trump", "Why can't they do the attack, make it a sneak attack, and after the attack is made, inform the American public that we've knocked out the leaders, we've had a tremendous success?"),
        ("Donald Trump", "People leave."),
        ("Donald Trump", "Why do they have to say we're going to be attacking Mosul within the next four to six weeks, which is what they're saying?"),
        ("Donald Trump", "How stupid is our country?"),
    ]),
    ("debate-2016-3b", "2016-10-19", "Third 2016 presidential debate", [
        ("Donald Trump", "But the leaders that we wanted to get are all gone because they're smart."),
        ("Donald Trump", "They say, what do we need this for?"),
        ("Donald Trump", "So Mosul is going to be a wonderful thing."),
        ("Donald Trump", "And Iran should write us a letter of thank you, just like the really stupid the stupidest deal of all time, a deal that's going to give Iran absolutely nuclear weapons."),
    ]),
    ("debate-2016-2", "2016-10-09", "Second 2016 presidential debate", [
        ("Hillary Clinton", "And we should demand that Donald release all of his tax returns so that people can see what are the entanglements and the financial relationships that he has..."),
        ("Moderator", "We're going to get to that later."),
        ("Moderator", "Secretary Clinton, you're out of time."),
        ("Hillary Clinton", "... with the Russians and other foreign powers."),
        ("Moderator", "Mr. Trump?"),
        ("Donald Trump", "Well, I think I should respond, because so ridiculous."),
    ]),
    ("debate-1976-1", "1976-09-23", "First 1976 presidential debate", [
        ("Gerald Ford", "On the other hand, when you have a bill of that magnitude, with those many provisions, a President has to sit and decide if there is more good than bad."),
        ("Gerald Ford", "And from the analysis that I have made so far, it seems to me that that tax bill does justify my signature and my approval."),
        ("Moderator", "Governor Carter, your response."),
        ("Jimmy Carter", "Well, Mr. Ford is changing considerably his previous philosophy."),
        ("Jimmy Carter", "The present tax structure is a disgrace to this country."),
    ]),
    ("debate-1988-2", "1988-10-13", "Second 1988 presidential debate", [
        ("George Bush", "In terms of negative campaigning, you know, I don't want to sound like a kid in the schoolyard: he started it."),
        ("George Bush", "But take a look at the Democratic convention take a look at it."),
        ("George Bush", "Do you remember the Senator from Boston chanting out there and the ridicule factor from that lady from Texas that was on there; I mean, come on, this was just outrageous."),
    ]),
]

SOTU = [
    ("sotu-2022", "2022-03-01", "2022 State of the Union", [
        ("Joe Biden", "Putin is now isolated from the world more than he has ever been."),
        ("Joe Biden", "Together, along with our allies, we are right now enforcing powerful economic sanctions."),
        ("Joe Biden", "We're cutting off Russia's largest banks from the international financial system; preventing Russia's Central Bank from defending the Russian ruble, making Putin's $630 billion war fund worthless."),
        ("Joe Biden", "We're choking Russia's access to technology that will sap its economic strength and weaken its military for years to come."),
        ("Joe Biden", "Tonight I say to the Russian oligarchs and the corrupt leaders who have bilked billions of dollars off this violent regime: No more."),
    ]),
    ("sotu-2020", "2020-02-04", "2020 State of the Union", [
        ("Donald Trump", "The terrorist responsible for killing Sergeant Hake was Qasem Soleimani, who provided the deadly roadside bomb that took Chris's life."),
        ("Donald Trump", "Soleimani was the Iranian regime's most ruthless butcher, a monster who murdered or wounded thousands of American servicemembers in Iraq."),
    ]),
    ("sotu-2019", "2019-02-05", "2019 State of the Union", [
        ("Donald Trump", "On Friday, it was announced that we added another 304,000 jobs last month alone, almost double the number expected."),
        ("Donald Trump", "An economic miracle is taking place in the United States, and the only thing that can stop it are foolish wars, politics, or ridiculous, partisan investigations."),
    ]),
    ("sotu-2018", "2018-01-30", "2018 State of the Union", [
        ("Donald Trump", "I am asking Congress to address the fundamental flaws in the terrible Iran nuclear deal."),
        ("Donald Trump", "My administration has also imposed tough sanctions on the communist and socialist dictatorships in Cuba and Venezuela."),
        ("Donald Trump", "But no regime has oppressed its own citizens more totally or brutally than the cruel dictatorship in North Korea."),
        ("Donald Trump", "In April, this will be the last time you will ever file under the old and very broken system, and millions of Americans will have more take-home pay starting next month—a lot more."),
        ("Donald Trump", "We eliminated an especially cruel tax that fell mostly on Americans making less than $50,000 a year, forcing them to pay tremendous penalties simply because they couldn't afford Government-ordered health plans."),
    ]),
    ("sotu-2017", "2017-02-28", "2017 Address to a Joint Session of Congress", [
        ("Donald Trump", "We cannot allow a beachhead of terrorism to form inside America."),
        ("Donald Trump", "We cannot allow our Nation to become a sanctuary for extremists."),
        ("Donald Trump", "That is why my administration has been working on improved vetting procedures, and we will shortly take new steps to keep our Nation safe and to keep those out who will do us harm."),
        ("Donald Trump", "As promised, I directed the Department of Defense to develop a plan to demolish and destroy ISIS, a network of lawless savages that have slaughtered Muslims and Christians, and men and women and children of all faiths and all beliefs."),
        ("Donald Trump", "We will work with our allies, including our friends and allies in the Muslim world, to extinguish this vile enemy from our planet."),
    ]),
    ("sotu-2016", "2016-01-12", "2016 State of the Union", [
        ("Barack Obama", "But after years now of record corporate profits, working families won't get more opportunity or bigger paychecks just by letting big banks or big oil or hedge funds make their own rules at everybody else's expense."),
        ("Barack Obama", "Middle class families are not going to feel more secure because we allowed attacks on collective bargaining to go unanswered."),
        ("Barack Obama", "Food stamp recipients did not cause the financial crisis; recklessness on Wall Street did."),
    ]),
    ("sotu-2012", "2012-01-24", "2012 State of the Union", [
        ("Barack Obama", "In 2008, the house of cards collapsed."),
        ("Barack Obama", "We learned that mortgages had been sold to people who couldn't afford or understand them."),
        ("Barack Obama", "Banks had made huge bets and bonuses with other people's money."),
        ("Barack Obama", "Regulators had looked the other way or didn't have the authority to stop the bad behavior."),
        ("Barack Obama", "It was wrong, it was irresponsible, and it plunged our economy into a crisis that put millions out of work, saddled us with more debt, and left innocent, hard-working Americans holding the bag."),
    ]),
    ("sotu-1991", "1991-01-29", "1991 State of the Union", [
        ("George Bush", "Last year, our friends and allies provided the bulk of the economic costs of Desert Shield."),
        ("George Bush", "And now, having received commitments of over $40 billion for the first 3 months of 1991, I am confident they will do no less as we move through Desert Storm."),
        ("George Bush", "But the world has to wonder what the dictator of Iraq is thinking."),
        ("George Bush", "If he thinks that by targeting innocent civilians in Israel and Saudi Arabia, that he will gain advantage, he is dead wrong."),
        ("George Bush", "If he thinks that he will advance his cause through tragic and despicable environmental terrorism, he is dead wrong."),
    ]),
    ("sotu-1982", "1982-01-26", "1982 State of the Union", [
        ("Ronald Reagan", "Contrary to some of the wild charges you may have heard, this administration has not and will not turn its back on America's elderly or America's poor."),
        ("Ronald Reagan", "Under the new budget, funding for social insurance programs will be more than double the amount spent only 6 years ago."),
        ("Ronald Reagan", "But it would be foolish to pretend that these or any programs cannot be made more efficient and economical."),
    ]),
]

CAMPAIGN = [
    ("camp-2020-biden-a", "2020-10-06", "Biden remarks", [
        ("Joe Biden", "The last thing you need is a President who ignores you, looks down at you, who just doesn't understand you."),
        ("Joe Biden", "Like President Trump."),
        ("Joe Biden", "His reckless personal conduct since his diagnosis, the destabilizing effect it's having on our government, is unconscionable."),
    ]),
    ("camp-2020-biden-b", "2020-10-20", "Biden remarks", [
        ("Joe Biden", "I'm so grateful to have earned the UA's endorsement — and to have 355,000 proud plumbers, pipefitters, and more behind me."),
        ("Joe Biden", "I also want to thank Rick for sharing his story with us today—and for being part of our convention this year where he shared his story with America."),
        ("Joe Biden", "Farmers all across this country have been gutted by President Trump's broken promises and reckless trade war."),
    ]),
    ("camp-2020-trump", "2020-10-30", "Trump rally", [
        ("Donald Trump", "This is the most important election in the history of our country."),
        ("Donald Trump", "Six months ago I was saying, \"Well, how do you compare with the last one?\""),
        ("Donald Trump", "I don't know."),
        ("Donald Trump", "That was important."),
        ("Donald Trump", "The fact is, this is the single most important election in the history of our country."),
        ("Donald Trump", "And sleepy Joe Biden's made a corrupt bargain."),
    ]),
    ("camp-2016-trump-a", "2016-10-13", "Trump rally", [
        ("Donald Trump", "Now, Bernie Sanders should be angry right?"),
        ("Donald Trump", "Shouldn't he be angry?"),
        ("Donald Trump", "Now, I'll tell you what."),
        ("Donald Trump", "The system is rigged."),
        ("Donald Trump", "The system is rigged."),
        ("Donald Trump", "I've been saying it for a—it's rigged, and we're gonna straighten it out."),
        ("Donald Trump", "But the system is rigged."),
        ("Donald Trump", "Hillary is not the victim; the American people are the victims of this system."),
        ("Donald Trump", "So corrupt in so many ways."),
    ]),
    ("camp-2016-trump-b", "2016-10-22", "Trump rally", [
        ("Donald Trump", "I want the entire corrupt Washington establishment to hear and to heed the words we all will be saying right now."),
        ("Donald Trump", "When we win on November 8th, we are going to Washington, D.C. and we are going to drain the swamp."),
        ("Donald Trump", "Gonna drain the swamp."),
        ("Donald Trump", "We're gonna drain the swamp, folks."),
        ("Donald Trump", "We're gonna drain that swamp."),
        ("Donald Trump", "Another important issue for Americans is integrity in journalism."),
        ("Donald Trump", "These people are among the most dishonest people I've ever met, spoken to, done business with."),
        ("Donald Trump", "These are the most dishonest people."),
    ]),
    ("camp-2016-trump-c", "2016-11-02", "Trump rally", [
        ("Donald Trump", "Our trade deals, we lose $800 billion a year on trade."),
        ("Donald Trump", "We have trade deficits."),
        ("Donald Trump", "Think of that."),
        ("Donald Trump", "Who negotiates these deals?"),
        ("Donald Trump", "You know who does?"),
        ("Donald Trump", "Stupid people."),
        ("Donald Trump", "Stupid people."),
        ("Donald Trump", "With very stupid leadership."),
    ]),
    ("camp-2016-trump-d", "2016-11-07", "Trump rally", [
        ("Donald Trump", "We will terminate NAFTA and get a much better deal for our workers if we can't renegotiate it properly."),
        ("Donald Trump", "We're gonna get a better deal for our workers and for our companies."),
        ("Donald Trump", "Because we cannot continue to be the people led by stupid people."),
    ]),
    ("camp-2016-clinton-a", "2016-10-18", "Clinton remarks", [
        ("Hillary Clinton", "We should honor the men and women in uniform who fight for our country."),
        ("Hillary Clinton", "That's why I was so appalled when Donald Trump tweeted that the new effort underway to push the terrorists out of the key city of Mosul is already, and I quote him, \"a total disaster\" and that our country is, again a quote, \"looking dumb.\""),
        ("Hillary Clinton", "Really?"),
        ("Hillary Clinton", "He's declaring defeat before the battle has even started."),
        ("Hillary Clinton", "He's proving once again he is unqualified to be commander in chief of our military."),
    ]),
    ("camp-2016-clinton-b", "2016-10-27", "Clinton remarks", [
        ("Hillary Clinton", "But this is not new."),
        ("Hillary Clinton", "I know I'm reaching out to Republicans and Independents as well as Democrats because I want to be the president for all Americans."),
        ("Hillary Clinton", "And, when you think about it, what he said at the convention, 'I alone can fix it,' runs counter to who we are as Americans."),
        ("Hillary Clinton", "We work together."),
        ("Hillary Clinton", "So there are many reasons why I think it is fair to conclude that Donald Trump is unqualified and unfit to be president."),
    ]),
    ("camp-2008-mccain-a", "2008-10-21", "McCain remarks", [
        ("John McCain", "In a time of trouble and danger for our country, who will put our country first?"),
        ("John McCain", "In 21 months, during hundreds of speeches, town halls and debates, I have kept my promise to level with you about my plans to reform Washington and get this country moving again."),
        ("John McCain", "As a senator, I've seen the corrupt ways of Washington in wasteful spending and other abuses of power."),
    ]),
    ("camp-2008-mccain-b", "2008-10-28", "McCain remarks", [
        ("John McCain", "In his three short years in the Senate, he has requested nearly a billion dollars in pork projects for his state - a million dollars for every day he's been in office."),
        ("John McCain", "Far from fighting earmarks in Congress, Senator Obama has been an eager participant in this corrupt system."),
    ]),
    # Outside the 30-day window; the campaign filter must drop these.
    ("camp-2016-trump-june", "2016-06-22", "Trump speech", [
        ("Donald Trump", "Our leaders are stupid."),
        ("Donald Trump", "Very stupid."),
    ]),
    ("camp-2004-kerry", "2004-10-25", "Kerry remarks", [
        ("John Kerry", "This is a reckless policy."),
    ]),
]

ADJECTIVES = set("""
stupid dumb racist ridiculous outrageous corrupt ruthless foolish cruel vile
irresponsible despicable reckless unconscionable dishonest unqualified unfit
bad horrible sad dark wonderful smart new powerful economic international
financial russian largest deadly roadside iranian american terrible broken
tough communist socialist old important single better big corporate secure
collective huge innocent wrong dead tragic environmental elderly poor social
efficient economical negative democratic present previous tremendous last
next entire key total proud grateful personal wasteful short eager angry fair
core modern foreign nuclear good lawless violent worthless fundamental
responsible middle sleepy safe muslim wild rigged appalled destabilizing
""".split())

PUNCT = set(string.punctuation) | set("–—‘’“”•…")


def load_contractions():
    exact, suffixes = {}, []
    for line in (DATA / "contractions.tsv").read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("\t")
        if key.startswith("~"):
            suffixes.append((key[1:], value))
        else:
            exact[key] = value
    return exact, suffixes


EXACT, SUFFIXES = load_contractions()


def expand(token):
    if token in EXACT:
        return EXACT[token]
    for suffix, value in SUFFIXES:
        if len(token) > len(suffix) and token.endswith(suffix):
            return token[: -len(suffix)] + value
    return token


def normalize(text):
    text = text.replace("‘", "'").replace("’", "'")
    for dash in ("–", "—", "-"):
        text = text.replace(dash, " ")
    words = []
    for tok in text.split():
        core = tok.strip("".join(PUNCT)).lower()
        for piece in expand(core).split():
            clean = "".join(c for c in piece if c not in PUNCT)
            if clean:
                words.append(clean)
    return words


def load_lexicon():
    terms = set()
    for line in (DATA / "divisive_lexicon.txt").read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            terms.add(line.rstrip("*"))
    return terms


def election_day(year):
    # First Tuesday after the first Monday in November.
    d = datetime.date(year, 11, 2)
    while d.weekday() != 1:
        d += datetime.timedelta(days=1)
    return d


def cycle_of(date):
    y = date.year
    return y + (-y % 4)


def write_corpus(path, genre, docs):
    with open(path, "w", encoding="utf-8") as out:
        for doc_id, date, title, lines in docs:
            for seq, (speaker, text) in enumerate(lines):
                words = normalize(text)
                rec = {
                    "doc_id": doc_id, "genre": genre, "date": date, "title": title,
                    "speaker": speaker, "party": PARTY[speaker], "seq": seq, "text": text,
                    "pos": ["JJ" if w in ADJECTIVES else "NN" for w in words],
                }
                out.write(json.dumps(rec, ensure_ascii=False) + "\n")


def num(v):
    return "0" if v == 0 else f"{v:.10g}"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def golden(genre, docs, lexicon, window=None):
    kept = []
    for doc_id, date, title, lines in docs:
        d = datetime.date.fromisoformat(date)
        if window is not None:
            days, min_cycle = window
            eday = election_day(cycle_of(d))
            if not (eday - datetime.timedelta(days=days) <= d <= eday and cycle_of(d) >= min_cycle):
                continue
        kept.append((doc_id, d, lines))

    term_counts, total = {}, 0
    by_speaker = {}
    lengths = {}
    for doc_id, d, lines in kept:
        for speaker, text in lines:
            words = normalize(text)
            st = lengths.setdefault(speaker, [0, 0, 0])
            st[0] += 1
            st[1] += len(words)
            st[2] += len(text)
            if PARTY[speaker] == "O":
                continue
            total += len(words)
            row = by_speaker.setdefault(speaker, [0, 0])
            row[1] += len(words)
            for w in words:
                if w in lexicon:
                    term_counts[w] = term_counts.get(w, 0) + 1
                    row[0] += 1

    (HERE / "golden" / f"{genre}_divisive_by_term.csv").write_text(csv_text(
        ["group", "matches", "total_words", "frequency"],
        [[t, c, total, num(c / total)] for t, c in sorted(term_counts.items())]))
    (HERE / "golden" / f"{genre}_divisive_by_speaker.csv").write_text(csv_text(
        ["group", "matches", "total_words", "frequency"],
        [[s, m, n, num(m / n)] for s, (m, n) in by_speaker.items()]))
    (HERE / "golden" / f"{genre}_sentence_lengths.csv").write_text(csv_text(
        ["speaker", "sentences", "mean_words", "mean_chars"],
        [[s, n, num(w / n), num(c / n)] for s, (n, w, c) in sorted(lengths.items())]))
    return term_counts


# Hand counts of whole-token lexicon hits, pool speakers only. Inflected
# forms such as "stupidest" or "corruption" are not lexicon entries.
HAND_COUNTS = {
    "debate": {"racist": 6, "ridiculous": 2, "stupid": 2, "disgrace": 1, "outrageous": 1},
    "sotu": {"corrupt": 1, "ruthless": 1, "foolish": 2, "ridiculous": 1, "cruel": 2,
             "savages": 1, "vile": 1, "irresponsible": 1, "despicable": 1},
    "campaign": {"reckless": 2, "unconscionable": 1, "corrupt": 5, "dishonest": 2,
                 "stupid": 4, "dumb": 1, "unqualified": 2},
}

RULES = {
    "debate": {
        "genre": "debate",
        "party_keywords": {"D": ["democrat", "democrats"], "R": ["republican", "republicans"]},
        "possible_triggers": ["you", "your", "my opponent", "senator from boston"],
        "unresolved_surnames": [],
        "speakers": {
            "Donald Trump": {"names": ["donald trump", "donald", "trump"],
                             "opponents": ["joe biden", "biden", "hillary", "clinton"]},
            "Joe Biden": {"names": ["joe biden", "biden"], "opponents": ["trump"]},
            "Hillary Clinton": {"names": ["hillary clinton", "hillary", "clinton"],
                                "opponents": ["trump"]},
            "Gerald Ford": {"names": ["gerald ford", "ford"], "opponents": ["carter"]},
            "Jimmy Carter": {"names": ["jimmy carter", "carter"], "opponents": ["ford"]},
            "George Bush": {"names": ["george bush", "bush"], "opponents": ["dukakis"]},
        },
    },
    "sotu": {
        "genre": "sotu",
        "party_keywords": {},
        "possible_triggers": ["congress"],
        "unresolved_surnames": [],
        "speakers": {
            "Joe Biden": {"names": ["biden"], "opponents": ["republicans"]},
            "Donald Trump": {"names": ["trump"], "opponents": ["democrats"]},
            "Barack Obama": {"names": ["obama"], "opponents": ["republicans"]},
            "George Bush": {"names": ["bush"], "opponents": ["democrats"]},
            "Ronald Reagan": {"names": ["reagan"], "opponents": ["democrats"]},
        },
    },
    "campaign": {
        "genre": "campaign",
        "party_keywords": {},
        "possible_triggers": ["washington establishment"],
        "unresolved_surnames": ["sanders"],
        "speakers": {
            "Joe Biden": {"names": ["joe biden"], "opponents": ["trump", "president trump"]},
            "Donald Trump": {"names": ["donald trump"],
                             "opponents": ["hillary", "clinton", "joe biden", "biden"]},
            "Hillary Clinton": {"names": ["hillary clinton"], "opponents": ["donald trump", "trump"]},
            "John McCain": {"names": ["john mccain"], "opponents": ["obama", "senator obama"]},
            "John Kerry": {"names": ["john kerry"], "opponents": ["bush"]},
        },
    },
}


def main():
    lexicon = load_lexicon()
    sets = [("debate", DEBATES, None), ("sotu", SOTU, None), ("campaign", CAMPAIGN, (30, 2008))]
    for genre, docs, window in sets:
        write_corpus(HERE / f"{genre}.jsonl", genre, docs)
        counts = golden(genre, docs, lexicon, window)
        if counts != HAND_COUNTS[genre]:
            raise SystemExit(f"{genre}: oracle {counts} disagrees with hand counts")
        (HERE / f"rules_{genre}.json").write_text(json.dumps(RULES[genre], indent=2) + "\n")


if __name__ == "__main__":
    main()
