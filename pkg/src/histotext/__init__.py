"""histotext: turn digitized historical documents into structured,
queryable corpora.

The pipeline runs normalization, segmentation, shallow parsing, entity
and concept annotation, verb-oriented relation extraction, TEI export,
and serves the result through a read-only consultation API.
"""

__version__ = "0.1.0"
