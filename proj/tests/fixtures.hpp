#pragma once

// Rule corpus from the first Logic-Q instance, used as a parser and propagation
// fixture across the test suite.
inline constexpr const char* kAliceRules = R"FIX(If Alice is aggressive and difficult and rational, then Alice is supportive.
If Alice is aggressive and hilarious and light, then Alice is unpleasant.
If Alice is aggressive and hurt, then Alice is calm.
If Alice is aggressive and loving, then Alice is versatile.
If Alice is aggressive, then Alice is difficult.
If Alice is aggressive, then Alice is elated.
If Alice is amused and dull and sensible, then Alice is hurt.
If Alice is amused and hypocritical, then Alice is elated.
If Alice is amused and precious, then Alice is difficult.
If Alice is amused and sleepy, then Alice is rational.
If Alice is calm and grumpy and light, then Alice is frightened.
If Alice is calm and loving, then Alice is dull.
If Alice is calm, then Alice is silly.
If Alice is different and fearless and versatile, then Alice is elated.
If Alice is different and hypocritical, then Alice is unpleasant.
If Alice is different and powerful, then Alice is messy.
If Alice is different and sensible and shiny, then Alice is rational.
If Alice is different and shiny, then Alice is tired.
If Alice is different and thoughtless, then Alice is sensible.
If Alice is different, then Alice is sensible.
If Alice is difficult and hypocritical, then Alice is versatile.
If Alice is difficult and loving and versatile, then Alice is thoughtless.
If Alice is difficult and precious, then Alice is tired.
If Alice is difficult and shiny, then Alice is elated.
If Alice is difficult and sleepy, then Alice is dull.
If Alice is dull and frightened and sensible, then Alice is elated.
If Alice is dull and light, then Alice is different.
If Alice is dull and loving and messy, then Alice is powerful.
If Alice is dull and precious and rational, then Alice is modern.
If Alice is elated and rational and tired, then Alice is sensible.
If Alice is elated and supportive and thoughtless, then Alice is aggressive.
If Alice is elated, then Alice is messy.
If Alice is fearless and grumpy and shiny, then Alice is frightened.
If Alice is fearless and messy, then Alice is frightened.
If Alice is fearless, then Alice is amused.
If Alice is fearless, then Alice is shiny.
If Alice is frightened and hurt and precious, then Alice is supportive.
If Alice is frightened and rational, then Alice is different.
If Alice is frightened and silly, then Alice is calm.
If Alice is frightened, then Alice is unpleasant.
If Alice is grumpy and hurt and powerful, then Alice is elated.
If Alice is grumpy, then Alice is shiny.
If Alice is hilarious and hurt and modern, then Alice is shiny.
If Alice is hilarious and unpleasant, then Alice is fearless.
If Alice is hilarious, then Alice is hurt.
If Alice is hurt and hypocritical, then Alice is silly.
If Alice is hurt and light and unpleasant, then Alice is amused.
If Alice is hurt and light and unpleasant, then Alice is supportive.
If Alice is hurt and messy and modern, then Alice is calm.
If Alice is hurt and messy and supportive, then Alice is sleepy.
If Alice is hurt and sensible and unpleasant, then Alice is shiny.
If Alice is hurt and silly, then Alice is frightened.
If Alice is hypocritical and shiny and thoughtless, then Alice is dull.
If Alice is loving, then Alice is powerful.
If Alice is loving, then Alice is silly.
If Alice is modern, then Alice is loving.
If Alice is rational and shiny, then Alice is modern.
If Alice is sensible, then Alice is rational.
If Alice is shiny and silly and unpleasant, then Alice is hurt.
If Alice is shiny, then Alice is powerful.
If Alice is sleepy and versatile, then Alice is calm.
If Alice is sleepy and versatile, then Alice is sensible.
If Alice is supportive and tired, then Alice is elated.
If Alice is tired, then Alice is sensible.
If Alice is unpleasant, then Alice is modern.
)FIX";
