import pytest

from actcause import fixtures, parser


@pytest.fixture(scope="session")
def blocks():
    return parser.parse_file(fixtures.BLOCKS_SOURCE)


@pytest.fixture(scope="session")
def bat(blocks):
    return blocks.bat


@pytest.fixture(scope="session")
def vocab(bat):
    return bat.vocabulary
