from concurrent.futures import ThreadPoolExecutor

import pytest
from opentelemetry import trace
from opentelemetry.sdk.trace import TracerProvider

from drumchart_curation.core.observability.context import TrackContext
from drumchart_curation.core.observability.tracing import (
    OpenTelemetrySettings,
    TraceContextModel,
    configure_tracing,
    span_context,
    span_function,
)


@pytest.fixture(scope="module")
def tracer():
    configure_tracing(OpenTelemetrySettings(ENABLE_CONSOLE_EXPORTER=True))
    yield trace.get_tracer("drumchart_curation.test")

    provider = trace.get_tracer_provider()
    if hasattr(provider, "shutdown"):
        provider.shutdown()


def ids(span) -> tuple[str, str]:
    context = span.get_span_context()
    return format(context.trace_id, "032x"), format(context.span_id, "016x")


def test_provider_is_installed(tracer):
    configure_tracing(OpenTelemetrySettings())
    assert isinstance(trace.get_tracer_provider(), TracerProvider)


def test_configured_service_name(tracer):
    resource = trace.get_tracer_provider().resource
    assert resource.attributes["service.name"] == "drumchart-curation"


def test_no_span_ids_outside_spans(tracer):
    with TraceContextModel.bind(trace_id="0" * 32, span_id="1" * 16):
        assert TraceContextModel.span_id.get() == "1" * 16

    with pytest.raises(LookupError):
        TraceContextModel.trace_id.get()


def test_stage_span_binds_its_ids(tracer):
    with span_context(tracer, "ingest") as span:
        assert (TraceContextModel.trace_id.get(), TraceContextModel.span_id.get()) == ids(span)

    with pytest.raises(LookupError):
        TraceContextModel.span_id.get()


def test_stage_spans_nest_under_the_track_span(tracer):
    with span_context(tracer, "convert_track") as track_span:
        with span_context(tracer, "align") as stage_span:
            assert TraceContextModel.span_id.get() == ids(stage_span)[1]
            assert ids(stage_span)[0] == ids(track_span)[0]

        assert TraceContextModel.span_id.get() == ids(track_span)[1]


def test_span_function_runs_inside_a_child_span(tracer):
    @span_function("resolve")
    def resolve(n_onsets):
        return n_onsets, TraceContextModel.trace_id.get(None), TraceContextModel.span_id.get(None)

    with span_context(tracer, "convert_track") as parent:
        n_onsets, trace_id, span_id = resolve(12)

    assert n_onsets == 12
    assert trace_id == ids(parent)[0]
    assert span_id != ids(parent)[1]


def test_span_context_sets_attributes(tracer):
    with TrackContext.bind(id="song_a"):
        with span_context(tracer, "align", **{"track.id": TrackContext.id.get()}, n_beats=32) as span:
            assert span.attributes["track.id"] == "song_a"
            assert span.attributes["n_beats"] == 32


def test_tracks_in_parallel_get_separate_traces(tracer):
    def convert(track_id):
        with TrackContext.bind(id=track_id), span_context(tracer, "convert_track"):
            return TrackContext.id.get(), TraceContextModel.trace_id.get()

    with ThreadPoolExecutor(max_workers=2) as executor:
        (id_a, trace_a), (id_b, trace_b) = executor.map(convert, ["song_a", "song_b"])

    assert (id_a, id_b) == ("song_a", "song_b")
    assert trace_a != trace_b
