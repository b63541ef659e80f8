"""Sentiment arcs for long-form narrative text.

Lexicon scoring with a sliding segment context, six-shape arc
classification, Ward clustering of arcs across a corpus, and a
bag-of-words narrative-structure tagger.
"""

from .arcshape import ArcLabel, NormalizedArc, Shape, classify_arc, lowpass, prepare, resample, smooth_ma, znormalize
from .cluster import ClusterAssignment, DistanceMatrix, Linkage, cluster_means, cut, distance_matrix, ward_linkage
from .corpus import FreqVector, Segment, SegmentMatrix, WordList, frequency_vector, segment, segment_matrix, stack, tokenize
from .lexicon import Lexicon, LexiconEntry, LexiconError, ScoreVector, StopMask, load_lexicon, score_vector, stop_mask
from .sentiment import NO_SIGNAL, SentimentArc, arc, emotion_score, interpolate_gaps

__version__ = "0.1.0"
