from pathlib import Path

from archlint.annotations import (
    AnnotationInstance,
    AnnotationKind,
    CodeModel,
    SourceLocation,
    TargetKind,
    dump_code_model,
    extract_attributes,
    extract_pragmas,
    resolve_context,
    validate_targets,
)

DATA = Path(__file__).parent / "data"

CAR_SOLO = (DATA / "car_solo" / "Car.java").read_text()


def _attrs(text: str, path: str = "Car.java") -> list[AnnotationInstance]:
    instances, findings = extract_attributes(text, path)
    assert findings == []
    return instances


def test_attribute_extraction_full_example() -> None:
    instances = _attrs(CAR_SOLO)
    assert len(instances) == 5
    comp, rear, e, add, conn = instances

    assert comp.kind is AnnotationKind.COMPONENT
    assert comp.values == ("Car",)
    assert comp.target is TargetKind.TYPE
    assert comp.target_name == "Car"
    assert comp.location == SourceLocation("Car.java", 1, 8)

    assert rear.kind is AnnotationKind.PART
    assert rear.values == ("rear",)
    assert rear.target is TargetKind.FIELD
    assert rear.target_name == "rear"
    assert rear.enclosing_components == ("Car",)
    assert rear.location == SourceLocation("Car.java", 2, 13)

    assert e.kind is AnnotationKind.PART
    assert e.values == ("e",)
    assert e.location == SourceLocation("Car.java", 4, 13)

    assert add.kind is AnnotationKind.ADD_PART
    assert add.values == ("rear", "e")
    assert add.target is TargetKind.CONSTRUCTOR
    assert add.target_name == "Car"
    assert add.location == SourceLocation("Car.java", 6, 12)

    assert conn.kind is AnnotationKind.CONNECTS
    assert conn.values == ()
    assert dict(conn.attrs) == {"left": "rear", "right": "e.p", "type": "LEFT"}
    assert conn.target is TargetKind.CONSTRUCTOR
    assert conn.target_name == "Car"
    assert conn.enclosing_components == ("Car",)
    assert conn.location == SourceLocation("Car.java", 7, 9)


def test_attribute_array_values_preserve_order() -> None:
    text = 'class X { public @AddPart({"b", "a", "c"}) X() {} }'
    instances = _attrs(text, "X.java")
    assert instances[0].values == ("b", "a", "c")


def test_foreign_annotations_ignored() -> None:
    text = (
        "public @Component(\"Car\") class Car {\n"
        "    @Override\n"
        "    @Deprecated\n"
        "    public String toString() { return \"car\"; }\n"
        "}\n"
    )
    instances = _attrs(text)
    assert [i.kind for i in instances] == [AnnotationKind.COMPONENT]


def test_enclosing_component_tracks_braces() -> None:
    text = (
        'public @Component("A") class A {\n'
        '    private @Part("x") B x;\n'
        "}\n"
        'public @Component("B") class B {\n'
        '    public @Port("q") void q() {}\n'
        "}\n"
    )
    instances = _attrs(text, "AB.java")
    by_name = {i.target_name: i.enclosing_components for i in instances}
    assert by_name["x"] == ("A",)
    assert by_name["q"] == ("B",)


def test_arrow_enum_reference_keeps_last_segment() -> None:
    text = 'class C { public @Connects(left="a", right="b", type=Arrow.BIDIR) C() {} }'
    instances = _attrs(text, "C.java")
    assert instances[0].attrs["type"] == "BIDIR"


def test_port_on_constructor_and_type() -> None:
    text = (
        'public @Component("S") @Port("boot") class S {\n'
        '    public @Port("init") S() {}\n'
        "}\n"
    )
    instances = _attrs(text, "S.java")
    ports = [i for i in instances if i.kind is AnnotationKind.PORT]
    assert {(p.target, p.target_name) for p in ports} == {
        (TargetKind.TYPE, "S"),
        (TargetKind.CONSTRUCTOR, "S"),
    }


def test_connector_on_local_variable() -> None:
    text = (
        'public @Component("Hub") class Hub {\n'
        "    public void wire() {\n"
        '        @Connector(left="a", right="b.p") Link link = new Link();\n'
        "    }\n"
        "}\n"
    )
    instances = _attrs(text, "Hub.java")
    conn = [i for i in instances if i.kind is AnnotationKind.CONNECTOR][0]
    assert conn.target is TargetKind.LOCAL
    assert conn.target_name == "link"
    assert conn.enclosing_components == ("Hub",)


def test_connector_on_field_and_type() -> None:
    text = (
        'public @Connector(left="a", right="b") class Pipe {\n'
        '    private @Connector(left="a", right="b") Pipe next;\n'
        "}\n"
    )
    instances = _attrs(text, "Pipe.java")
    assert [(i.target, i.target_name) for i in instances] == [
        (TargetKind.TYPE, "Pipe"),
        (TargetKind.FIELD, "next"),
    ]


def test_connector_rejects_unknown_attr() -> None:
    text = 'class C { @Connector(left="a", right="b", componentname="X") C c; }'
    instances, findings = extract_attributes(text, "C.java")
    assert instances == []
    assert [f.check_id for f in findings] == ["MALFORMED_ANNOTATION"]
    assert "componentname" in findings[0].message


def test_malformed_annotation_missing_required_attr() -> None:
    text = 'class C { public @Connects(left="a") C() {} }'
    instances, findings = extract_attributes(text, "C.java")
    assert instances == []
    assert len(findings) == 1
    assert findings[0].check_id == "MALFORMED_ANNOTATION"
    assert "right" in findings[0].message


def test_malformed_annotation_missing_value() -> None:
    instances, findings = extract_attributes("class C { @Part C c; }", "C.java")
    assert instances == []
    assert [f.check_id for f in findings] == ["MALFORMED_ANNOTATION"]


def test_unclassifiable_target_reported() -> None:
    instances, findings = extract_attributes('@Part("x")', "C.java")
    assert instances == []
    assert [f.check_id for f in findings] == ["UNCLASSIFIABLE_TARGET"]


def test_package_detected_from_declaration() -> None:
    text = 'package com.acme.vehicle;\npublic @Component("Car") class Car {}\n'
    instances = _attrs(text)
    assert instances[0].package == "com/acme/vehicle"


def test_package_falls_back_to_directory() -> None:
    instances = _attrs('public @Component("Car") class Car {}\n', "src/vehicle/Car.java")
    assert instances[0].package == "src/vehicle"


def test_pragma_extraction_basic() -> None:
    text = (
        "//@arch Component(\"Car\") @on type Car\n"
        "//@arch Part(\"rear\") @on field rear @in Car\n"
        "//@arch Connects(left=\"rear\", right=\"e.p\", type=LEFT) @on constructor Car @in Car\n"
    )
    instances, findings = extract_pragmas(text, "car.txt")
    assert findings == []
    assert [i.kind for i in instances] == [
        AnnotationKind.COMPONENT,
        AnnotationKind.PART,
        AnnotationKind.CONNECTS,
    ]
    assert instances[1].enclosing_components == ("Car",)
    assert instances[2].attrs["type"] == "LEFT"
    assert instances[2].target is TargetKind.CONSTRUCTOR


def test_pragma_line_numbers() -> None:
    text = "x = 1\n#@arch Component(\"App\") @on type App\n"
    instances, findings = extract_pragmas(text, "app.py")
    assert findings == []
    assert instances[0].location.line == 2


def test_pragma_custom_sigil() -> None:
    text = "//@@model Component(\"App\") @on type App\n"
    instances, findings = extract_pragmas(text, "app.cc", sigil="@@model")
    assert findings == []
    assert instances[0].kind is AnnotationKind.COMPONENT
    default_instances, _ = extract_pragmas(text, "app.cc")
    assert default_instances == []


def test_pragma_array_values() -> None:
    text = "//@arch AddPart({\"rear\", \"e\"}) @on constructor Car @in Car\n"
    instances, findings = extract_pragmas(text, "car.txt")
    assert findings == []
    assert instances[0].values == ("rear", "e")


def test_malformed_pragma_reported_not_fatal() -> None:
    text = (
        "//@arch Component(\"Ok\") @on type Ok\n"
        "//@arch Part( @on field x\n"
    )
    instances, findings = extract_pragmas(text, "f.txt")
    assert [i.kind for i in instances] == [AnnotationKind.COMPONENT]
    assert [f.check_id for f in findings] == ["MALFORMED_PRAGMA"]
    assert findings[0].locations[0].line == 2


def test_pragma_unknown_annotation_name() -> None:
    instances, findings = extract_pragmas("//@arch Wat(\"x\") @on type X\n", "f.txt")
    assert instances == []
    assert [f.check_id for f in findings] == ["MALFORMED_PRAGMA"]


def test_validate_targets_rules() -> None:
    loc = SourceLocation("f", 1, 1)

    def inst(kind: AnnotationKind, target: TargetKind) -> AnnotationInstance:
        return AnnotationInstance(
            kind=kind,
            values=("x",),
            attrs={},
            target=target,
            target_name="x",
            enclosing_components=(),
            location=loc,
            package="",
        )

    assert validate_targets(inst(AnnotationKind.PART, TargetKind.FIELD)) == []
    assert validate_targets(inst(AnnotationKind.CONNECTOR, TargetKind.LOCAL)) == []
    assert validate_targets(inst(AnnotationKind.PORT, TargetKind.METHOD)) == []
    assert validate_targets(inst(AnnotationKind.ADD_PART, TargetKind.CONSTRUCTOR)) == []

    bad = validate_targets(inst(AnnotationKind.COMPONENT, TargetKind.METHOD))
    assert [f.check_id for f in bad] == ["TARGET_RULE_VIOLATION"]
    assert "type" in bad[0].message

    assert validate_targets(inst(AnnotationKind.PART, TargetKind.METHOD)) != []
    assert validate_targets(inst(AnnotationKind.CONNECTS, TargetKind.FIELD)) != []


def _loose_instance(
    kind: AnnotationKind,
    line: int,
    *,
    values: tuple[str, ...] = (),
    enclosing: tuple[str, ...] = (),
    target: TargetKind = TargetKind.METHOD,
    name: str = "m",
) -> AnnotationInstance:
    return AnnotationInstance(
        kind=kind,
        values=values,
        attrs={},
        target=target,
        target_name=name,
        enclosing_components=enclosing,
        location=SourceLocation("f.txt", line, 1),
        package="",
    )


def test_resolve_context_inherits_preceding_component() -> None:
    comp = _loose_instance(
        AnnotationKind.COMPONENT, 1, values=("Car",), target=TargetKind.TYPE, name="Car"
    )
    port = _loose_instance(AnnotationKind.PORT, 2, values=("p",), name="p")
    resolved = resolve_context([comp, port])
    assert resolved[1].enclosing_components == ("Car",)


def test_resolve_context_keeps_explicit_context() -> None:
    comp = _loose_instance(
        AnnotationKind.COMPONENT, 1, values=("Car",), target=TargetKind.TYPE, name="Car"
    )
    port = _loose_instance(
        AnnotationKind.PORT, 2, values=("p",), enclosing=("Engine",), name="p"
    )
    resolved = resolve_context([comp, port])
    assert resolved[1].enclosing_components == ("Engine",)


def test_code_model_build_sorts_by_location() -> None:
    def inst(line: int, file: str) -> AnnotationInstance:
        return AnnotationInstance(
            kind=AnnotationKind.COMPONENT,
            values=("X",),
            attrs={},
            target=TargetKind.TYPE,
            target_name="X",
            enclosing_components=(),
            location=SourceLocation(file, line, 1),
            package="",
        )

    code = CodeModel.build([inst(9, "b.java"), inst(2, "a.java"), inst(1, "b.java")])
    keys = [(i.location.file, i.location.line) for i in code.instances]
    assert keys == [("a.java", 2), ("b.java", 1), ("b.java", 9)]


def test_dump_code_model_stable(car_solo_code: CodeModel) -> None:
    first = dump_code_model(car_solo_code)
    second = dump_code_model(car_solo_code)
    assert first == second
    assert first.endswith("\n")


def test_dump_matches_golden(car_solo_code: CodeModel) -> None:
    golden = (DATA / "golden" / "car_solo_extract.golden.json").read_text()
    assert dump_code_model(car_solo_code) == golden
