"""Bundled word lists.

STOP_WORDS is the classic 179-entry English function-word list used to prune
lexicon candidates. COMMON_WORDS is a small high-frequency vocabulary that
seeds the fallback language detector's trigram profile.
"""

from __future__ import annotations

STOP_WORDS: frozenset[str] = frozenset(
    """
    i me my myself we our ours ourselves you you're you've you'll you'd your
    yours yourself yourselves he him his himself she she's her hers herself it
    it's its itself they them their theirs themselves what which who whom this
    that that'll these those am is are was were be been being have has had
    having do does did doing a an the and but if or because as until while of
    at by for with about against between into through during before after
    above below to from up down in out on off over under again further then
    once here there when where why how all any both each few more most other
    some such no nor not only own same so than too very s t can will just don
    don't should should've now d ll m o re ve y ain aren aren't couldn
    couldn't didn didn't doesn doesn't hadn hadn't hasn hasn't haven haven't
    isn isn't ma mightn mightn't mustn mustn't needn needn't shan shan't
    shouldn shouldn't wasn wasn't weren weren't won won't wouldn wouldn't
    """.split()
)

COMMON_WORDS: frozenset[str] = frozenset(
    """
    time year people way day man thing woman life child world school state
    family student group country problem hand part place case week company
    system program question work government number night point home water
    room mother area money story fact month lot right study book eye job word
    business issue side kind head house service friend father power hour game
    line end member law car city community name president team minute idea
    body information back parent face others level office door health person
    art war history party result change morning reason research girl guy food
    moment air teacher force education first new good high old great big
    small large next early young important public bad same able get make go
    know take see come think look want give use find tell ask seem feel try
    leave call said would could also one two three many much every never
    still might must through between story acting script writing direction
    photography beautiful wonderful simple honest quiet steady strong clear
    heavy light bright dark happy angry tired lazy funny boring moving
    playing working running walking talking reading learning training
    planning building growing helping starting ending turning keeping
    holding carrying following showing telling asking answering thinking
    feeling looking watching listening speaking standing sitting staying
    started ended turned kept held carried followed showed told asked
    answered thought felt looked watched listened spoke stood sat stayed
    stretched passed missed opened closed covered reached learned played
    worked lived moved loved liked wanted needed used tried called seemed
    nation station action section question mention attention position
    condition direction collection connection decision television relation
    movement statement moment treatment agreement development government
    kindness darkness business happiness careful useful helpful powerful
    possible probable available capable notable breaking point idea past
    far simply stays its
    """.split()
)
