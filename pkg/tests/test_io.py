import json
import math

from hempss import _io


def test_csv_format():
    text = _io.csv_text(["a", "b"], [[1, 0.1 + 0.2], [True, math.nan]])
    assert text == "a,b\n1,0.3\nTrue,nan\n"


def test_json_seventeen_digits():
    text = _io.dumps17({"x": 0.1, "y": [1.0, 2], "z": None}, indent=None)
    assert text == '{"x": 0.10000000000000001, "y": [1.0, 2], "z": null}'
    assert json.loads(text)["x"] == 0.1


def test_json_strings_untouched():
    text = _io.dumps17({"label": "@@f17:not a number", "v": 2.5})
    assert json.loads(text) == {"label": "@@f17:not a number", "v": 2.5}


def test_json_numpy_scalars():
    import numpy as np

    assert _io.dumps17([np.int64(3), np.bool_(True), np.float64(0.5)], indent=None) == "[3, true, 0.5]"
