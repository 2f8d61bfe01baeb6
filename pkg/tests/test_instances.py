import numpy as np
import pytest

from dilationlab.errors import InstanceFormatError, InvalidArgumentError
from dilationlab.families import _scalar_instance
from dilationlab.instances import (
    canonical_json,
    complex_to_json,
    digest,
    instance_to_json,
    json_to_complex,
    load_instance,
    parse_instance,
)

from conftest import INSTANCES_DIR


def test_complex_codec_roundtrip():
    z = 1.25 - 0.5j
    assert json_to_complex(complex_to_json(z), "here") == z
    with pytest.raises(InstanceFormatError):
        json_to_complex("nope", "here")
    with pytest.raises(InstanceFormatError):
        json_to_complex([1.0], "here")


def test_instance_roundtrip(scalar_pair):
    data = instance_to_json(
        scalar_pair.system, scalar_pair.representation, scalar_pair.parameters
    )
    again = parse_instance(data)
    assert digest(again.data) == digest(data)
    assert again.representation.dim == 1
    t = again.representation.t_maps[0]
    assert t[0, 0, 0] == pytest.approx(0.6)


def test_digest_is_canonical(scalar_pair):
    data = scalar_pair.data
    shuffled = dict(reversed(list(data.items())))
    assert canonical_json(data) == canonical_json(shuffled)
    assert digest(data) == digest(shuffled)
    bumped = dict(data)
    bumped["parameters"] = {**(data.get("parameters") or {}), "guard": 2}
    assert digest(bumped) != digest(data)


def test_load_bundled_instances():
    for name in ("scalar_pair.json", "nilpotent_pair.json", "unitary_scalar.json"):
        inst = load_instance(str(INSTANCES_DIR / name))
        assert inst.system.k >= 1
        assert inst.representation.dim >= 1


def test_missing_fields_raise_format_error(scalar_pair):
    with pytest.raises(InstanceFormatError):
        parse_instance({})
    data = dict(scalar_pair.data)
    data.pop("representation")
    with pytest.raises(InstanceFormatError):
        parse_instance(data)


def test_malformed_matrix_raises_format_error(scalar_pair):
    import copy

    data = copy.deepcopy(scalar_pair.data)
    data["representation"]["T"][0][0][0] = "oops"
    with pytest.raises(InstanceFormatError):
        parse_instance(data)


def test_mathematically_invalid_raises_argument_error(scalar_pair):
    import copy

    data = copy.deepcopy(scalar_pair.data)
    # break the flip: no longer a correspondence isomorphism
    data["flips"]["1,2"] = [[[2.0, 0.0]]]
    with pytest.raises(InvalidArgumentError):
        parse_instance(data)


def test_parse_keeps_noncontractive_for_validation():
    # mathematical validation of T happens downstream, not at parse time
    inst = parse_instance(_scalar_instance([np.array([[2.0]])]))
    assert inst.representation.t_maps[0][0, 0, 0] == pytest.approx(2.0)
