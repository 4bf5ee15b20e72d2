from pathlib import Path

import pytest

from drumchart_curation.components.alignment.settings import AlignmentSettings
from drumchart_curation.components.chart.settings import ChartSettings
from drumchart_curation.components.dataset.pipeline import PipelineConfig
from drumchart_curation.components.dataset.settings import DatasetSettings
from drumchart_curation.components.vocabulary.settings import VocabularySettings
from tests.fixtures.charts import GOLDEN_BEAT_TIMES, golden_smf, write_beats_file, write_chart_dir


@pytest.fixture
def pipeline_config() -> PipelineConfig:
    return PipelineConfig(
        chart=ChartSettings(),
        vocabulary=VocabularySettings(),
        alignment=AlignmentSettings(),
        dataset=DatasetSettings(),
    )


@pytest.fixture
def charts_dir(tmp_path) -> Path:
    path = tmp_path / "charts"
    path.mkdir()
    return path


@pytest.fixture
def beats_dir(tmp_path) -> Path:
    path = tmp_path / "beats_in"
    path.mkdir()
    return path


@pytest.fixture
def golden_chart(charts_dir, beats_dir) -> Path:
    """
    The eight-bar chart with beats estimated exactly on the chart's beat grid.
    """
    chart_dir = write_chart_dir(charts_dir, "golden", golden_smf())
    write_beats_file(beats_dir, "golden", GOLDEN_BEAT_TIMES)
    return chart_dir
