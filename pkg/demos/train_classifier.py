"""Train the coaxial-stacking random forest on rule-labelled synthetic junctions.

The labelling rule (H1H3 when J31 is empty and J23 is not; H1H2 when J12 is
empty and the H1-H2 stack is favourable; otherwise NONE) stands in for a real
crystal-structure table. The script reports out-of-bag accuracy against the
baselines, a label-shuffled control, and the call for the 1E8O junction.

Run: python3 demos/train_classifier.py
"""

from csminer import data_path
from csminer.features import ThermoParams
from csminer.forest import (
    ForestConfig,
    class_prior_baseline,
    majority_baseline,
    oob_accuracy,
    predict,
    read_dataset,
    train_forest,
)
from csminer.synthetic import shuffled, synthetic_dataset


def main() -> None:
    params = ThermoParams.load()
    config = ForestConfig(n_trees=100, m_try=4, seed=42)
    for noise in (0.0, 0.1):
        samples = synthetic_dataset(200, noise=noise, seed=42, params=params)
        forest = train_forest(samples, config)
        print(f"noise {noise:.0%}: OOB accuracy {oob_accuracy(forest, samples):.3f}, "
              f"majority baseline {majority_baseline(samples):.3f}")

    control = shuffled(synthetic_dataset(200, seed=42, params=params), seed=42)
    forest = train_forest(control, config)
    print(f"shuffled labels: OOB accuracy {oob_accuracy(forest, control):.3f}, "
          f"class-prior baseline {class_prior_baseline(control):.3f}")

    forest = train_forest(synthetic_dataset(200, seed=42, params=params), config)
    (e8o,) = read_dataset(data_path("1e8o_junction.tsv"), params)
    label, votes = predict(forest, e8o.features)
    tally = ", ".join(f"{k.value}:{v}" for k, v in votes.items())
    print(f"1E8O junction: predicted {label.value} ({tally}); annotated {e8o.label.value}")


if __name__ == "__main__":
    main()
