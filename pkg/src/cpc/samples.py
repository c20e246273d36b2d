"""Built-in example datasets.

``demo_dataset`` is the small branching configuration used across the docs
and tests: four axes, two expandable options on Axis_2, an expandable
"Enabled" option on Axis_3, and three lines of which two coincide at every
top-level axis and only separate inside the sub-dimensions.

``chatbot_dataset`` models food orders with nested branches (pizzas have
toppings, cheese toppings have a kind), exercising recursion two branches
deep. ``automl_log`` is a five-run pipeline search log in JSON-lines form,
and ``cars_csv`` is a small flat table for classic parallel-coordinates
behavior.

Run ``python -m cpc.samples OUTDIR`` to write all of them to disk.
"""

from __future__ import annotations

from .ingest import dataset_to_json
from .model import (
    Dataset,
    Schema,
    categorical,
    numeric,
    observation,
    option,
)


def demo_dataset() -> Dataset:
    schema = Schema((
        numeric("Axis_1", 0, 10, label="Axis 1"),
        categorical("Axis_2", [
            option("Option_A", [
                numeric("Sub_A1", 0, 1),
                categorical("Sub_A2", ["Low", "High"]),
            ]),
            option("Option_B", [
                numeric("Sub_B1", 0, 1),
                categorical("Sub_B2", ["Low", "High"]),
            ]),
        ], label="Axis 2"),
        categorical("Axis_3", [
            option("Enabled", [
                categorical("Subaxis_1", ["Suboption_1", "Suboption_2"]),
                numeric("Subaxis_2", 0, 100),
            ]),
            option("Disabled"),
        ], label="Axis 3"),
        numeric("Axis_4", 0, 5, label="Axis 4"),
    ))
    observations = (
        observation("line-1", {
            "Axis_1": 7.5,
            "Axis_2": "Option_A",
            "Axis_2/Option_A/Sub_A1": 0.8,
            "Axis_2/Option_A/Sub_A2": "High",
            "Axis_3": "Enabled",
            "Axis_3/Enabled/Subaxis_1": "Suboption_2",
            "Axis_3/Enabled/Subaxis_2": 90.0,
            "Axis_4": 4.0,
        }),
        observation("line-2", {
            "Axis_1": 7.5,
            "Axis_2": "Option_A",
            "Axis_2/Option_A/Sub_A1": 0.3,
            "Axis_2/Option_A/Sub_A2": "Low",
            "Axis_3": "Enabled",
            "Axis_3/Enabled/Subaxis_1": "Suboption_1",
            "Axis_3/Enabled/Subaxis_2": 40.0,
            "Axis_4": 4.0,
        }),
        observation("line-3", {
            "Axis_1": 2.0,
            "Axis_2": "Option_B",
            "Axis_2/Option_B/Sub_B1": 0.5,
            "Axis_2/Option_B/Sub_B2": "Low",
            "Axis_3": "Enabled",
            "Axis_3/Enabled/Subaxis_1": "Suboption_2",
            "Axis_3/Enabled/Subaxis_2": 10.0,
            "Axis_4": 1.0,
        }),
    )
    return Dataset(schema, observations)


def chatbot_dataset() -> Dataset:
    schema = Schema((
        categorical("item", [
            option("pizza", [
                categorical("topping", [
                    option("cheese", [
                        categorical("cheese_kind", ["mozzarella", "gorgonzola"]),
                    ]),
                    option("salami"),
                    option("veggie"),
                ]),
                numeric("diameter", 20, 40),
            ]),
            option("soft_drink", [
                categorical("size", ["small", "medium", "large"]),
                categorical("brand", ["cola_co", "fizzy"]),
                categorical("flavor", ["classic", "lemon"]),
            ]),
            option("salad", [
                categorical("dressing", ["vinaigrette", "yogurt"]),
                categorical("base", ["lettuce", "kale", "chicory"]),
            ]),
            option("dessert"),
            option("pasta"),
        ]),
        categorical("delivery", [
            option("self_pickup"),
            option("eat_in"),
            option("delivery", [
                categorical("city", ["springfield", "shelbyville"]),
                categorical("zip", ["49001", "49002", "49103"]),
            ]),
        ]),
        categorical("payment", [
            option("cash"),
            option("credit_card", [
                categorical("loyalty_program", ["basic", "gold"]),
            ]),
            option("online", [
                categorical("provider", ["wallet_a", "wallet_b"]),
            ]),
        ]),
    ))
    observations = (
        observation("order-1", {
            "item": "pizza",
            "item/pizza/topping": "cheese",
            "item/pizza/topping/cheese/cheese_kind": "mozzarella",
            "item/pizza/diameter": 32.0,
            "delivery": "delivery",
            "delivery/delivery/city": "springfield",
            "delivery/delivery/zip": "49001",
            "payment": "online",
            "payment/online/provider": "wallet_a",
        }),
        observation("order-2", {
            "item": "pizza",
            "item/pizza/topping": "salami",
            "item/pizza/diameter": 26.0,
            "delivery": "self_pickup",
            "payment": "cash",
        }),
        observation("order-3", {
            "item": "soft_drink",
            "item/soft_drink/size": "large",
            "item/soft_drink/brand": "cola_co",
            "item/soft_drink/flavor": "classic",
            "delivery": "eat_in",
            "payment": "cash",
        }),
        observation("order-4", {
            "item": "salad",
            "item/salad/dressing": "vinaigrette",
            "item/salad/base": "kale",
            "delivery": "delivery",
            "delivery/delivery/city": "shelbyville",
            "delivery/delivery/zip": "49002",
            "payment": "credit_card",
            "payment/credit_card/loyalty_program": "gold",
        }),
        observation("order-5", {
            "item": "dessert",
            "delivery": "eat_in",
            "payment": "credit_card",
            "payment/credit_card/loyalty_program": "basic",
        }),
        observation("order-6", {
            "item": "pizza",
            "item/pizza/topping": "cheese",
            "item/pizza/topping/cheese/cheese_kind": "gorgonzola",
            "item/pizza/diameter": 40.0,
            "delivery": "eat_in",
            "payment": "cash",
        }),
    )
    return Dataset(schema, observations)


AUTOML_RUNS = (
    {"runId": "run-1",
     "steps": [
         {"stepName": "preprocess", "blockId": "standard_scaler",
          "hyperparameters": {"with_centering": "yes"}},
         {"stepName": "feature_selection", "blockId": "select_k_best",
          "hyperparameters": {"k": 10}},
         {"stepName": "model", "blockId": "random_forest",
          "hyperparameters": {"max_depth": 8, "n_estimators": 200}},
     ],
     "metrics": {"accuracy": 0.91, "f1_score": 0.89, "train_seconds": 12.5}},
    {"runId": "run-2",
     "steps": [
         {"stepName": "preprocess", "blockId": "minmax_scaler",
          "hyperparameters": {}},
         {"stepName": "feature_selection", "blockId": "passthrough",
          "hyperparameters": {}},
         {"stepName": "model", "blockId": "xgboost",
          "hyperparameters": {"learning_rate": 0.1, "max_depth": 6, "n_estimators": 300}},
     ],
     "metrics": {"accuracy": 0.93, "f1_score": 0.92, "train_seconds": 30.0}},
    {"runId": "run-3",
     "steps": [
         {"stepName": "preprocess", "blockId": "standard_scaler",
          "hyperparameters": {"with_centering": "no"}},
         {"stepName": "feature_selection", "blockId": "select_k_best",
          "hyperparameters": {"k": 25}},
         {"stepName": "model", "blockId": "xgboost",
          "hyperparameters": {"learning_rate": 0.05, "max_depth": 4, "n_estimators": 500}},
     ],
     "metrics": {"accuracy": 0.94, "f1_score": 0.93, "train_seconds": 48.0}},
    {"runId": "run-4",
     "steps": [
         {"stepName": "preprocess", "blockId": "minmax_scaler",
          "hyperparameters": {}},
         {"stepName": "feature_selection", "blockId": "select_k_best",
          "hyperparameters": {"k": 10}},
         {"stepName": "model", "blockId": "logistic_regression",
          "hyperparameters": {"C": 1.0}},
     ],
     "metrics": {"accuracy": 0.88, "f1_score": 0.86, "train_seconds": 3.5}},
    {"runId": "run-5",
     "steps": [
         {"stepName": "preprocess", "blockId": "standard_scaler",
          "hyperparameters": {"with_centering": "yes"}},
         {"stepName": "feature_selection", "blockId": "passthrough",
          "hyperparameters": {}},
         {"stepName": "model", "blockId": "random_forest",
          "hyperparameters": {"max_depth": 12, "n_estimators": 100}},
     ],
     "metrics": {"accuracy": 0.90, "f1_score": 0.88, "train_seconds": 9.0}},
)


def automl_log() -> str:
    """Five-run synthetic pipeline search log, JSON lines."""
    import json

    return "\n".join(json.dumps(run, sort_keys=True) for run in AUTOML_RUNS) + "\n"


CARS_CSV = """\
cylinders,horsepower,weight,zero_to_sixty,year
8,320,3900,5.9,1970
8,300,4100,6.4,1971
8,280,3800,6.8,1973
8,210,3600,8.5,1976
6,165,3200,9.8,1972
6,150,3100,10.5,1975
6,140,3000,11.2,1978
4,95,2300,13.5,1974
4,90,2200,14.2,1977
4,110,2400,12.1,1979
4,130,2450,10.9,1980
6,170,2900,9.4,1981
"""

CARS_KINDS = "cylinders=categorical,horsepower=numeric,weight=numeric,zero_to_sixty=numeric,year=numeric"


def cars_csv() -> str:
    return CARS_CSV


def write_all(directory) -> list[str]:
    """Write every sample into a directory; returns the written paths."""
    from pathlib import Path

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, payload in (
        ("demo.json", dataset_to_json(demo_dataset(), pretty=True) + b"\n"),
        ("chatbot.json", dataset_to_json(chatbot_dataset(), pretty=True) + b"\n"),
        ("automl_runs.jsonl", automl_log().encode("utf-8")),
        ("cars.csv", CARS_CSV.encode("utf-8")),
    ):
        path = out / name
        path.write_bytes(payload)
        written.append(str(path))
    return written


if __name__ == "__main__":
    import sys

    if len(sys.argv) != 2:
        print("usage: python -m cpc.samples OUTDIR", file=sys.stderr)
        raise SystemExit(2)
    for written_path in write_all(sys.argv[1]):
        print(written_path)
