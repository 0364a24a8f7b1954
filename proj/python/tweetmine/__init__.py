from ._tweetmine import (
    ClusterModel,
    Corpus,
    DataError,
    DpgmmConfig,
    EmbeddingModel,
    Error,
    InvalidArgument,
    SkipGramConfig,
    TopicModel,
    cross_validate,
    fit_dpgmm,
    fit_lda,
    nbsvm_ratios,
    pool,
    preprocess,
    train_skipgram,
)

__all__ = [
    "ClusterModel",
    "Corpus",
    "DataError",
    "DpgmmConfig",
    "EmbeddingModel",
    "Error",
    "InvalidArgument",
    "SkipGramConfig",
    "TopicModel",
    "cross_validate",
    "fit_dpgmm",
    "fit_lda",
    "nbsvm_ratios",
    "pool",
    "preprocess",
    "train_skipgram",
]
