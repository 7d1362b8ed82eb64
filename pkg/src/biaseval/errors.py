"""Exception types shared across the toolkit."""


class BiasEvalError(Exception):
    """Base class for all toolkit errors."""


class EmbeddingFormatError(BiasEvalError):
    """An embedding file violates the word2vec text format."""


class VocabularyLossError(BiasEvalError):
    """A word set lost more words to the vocabulary than the allowed fraction."""

    def __init__(self, message, set_name=None, loss_fraction=None, dropped=()):
        super().__init__(message)
        self.set_name = set_name
        self.loss_fraction = loss_fraction
        self.dropped = list(dropped)


class EmptyResolutionError(BiasEvalError):
    """No word of a set was found in the vocabulary."""

    def __init__(self, message, set_name=None):
        super().__init__(message)
        self.set_name = set_name


class TemplateMismatchError(BiasEvalError):
    """A query does not have the set counts a metric requires."""


class DivergenceError(BiasEvalError):
    """Classifier training produced a non-finite loss."""


class DegenerateDistributionError(BiasEvalError):
    """A probability distribution could not be formed or scored."""


class UndefinedCorrelationError(BiasEvalError):
    """Rank correlation is undefined because one input has no rank variance."""


class TranslationRunError(BiasEvalError):
    """The translation backend failed mid-run.

    ``completed`` holds the records fetched before the failure so the run
    can be resumed without repeating them.
    """

    def __init__(self, message, completed=()):
        super().__init__(message)
        self.completed = list(completed)

    @property
    def completed_ids(self):
        return [record.id for record in self.completed]


class JoinCoverageError(BiasEvalError):
    """Too few corpus rows have translations to score reliably."""
