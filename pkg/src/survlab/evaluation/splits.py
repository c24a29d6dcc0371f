import numpy as np
from sklearn.model_selection import KFold

from ..errors import UsageError


def get_repeated_kfold_splits(
    n_samples: int,
    n_splits: int = 5,
    n_repeats: int = 1,
    seed: int = 0,
) -> list[tuple[int, int, np.ndarray, np.ndarray]]:
    """
    Shuffled k-fold splits, repeated with seeds seed, seed+1, ...
    Returns list of (repetition, fold, train_idx, test_idx)
    """
    if n_splits < 2:
        raise UsageError(f"Cross-validation needs at least 2 folds, got {n_splits}")
    if n_samples < n_splits:
        raise UsageError(f"Dataset of {n_samples} records is smaller than {n_splits} folds")
    if n_repeats < 1:
        raise UsageError(f"Repetitions must be >= 1, got {n_repeats}")

    splits = []
    index = np.arange(n_samples)
    for rep in range(n_repeats):
        kfold = KFold(n_splits=n_splits, shuffle=True, random_state=seed + rep)
        for fold, (train_idx, test_idx) in enumerate(kfold.split(index)):
            splits.append((rep, fold, train_idx, test_idx))
    return splits
