from pathlib import Path

import pytest

import diversified_influence
from diversified_influence.data_loader import DataLoader, load_communities, load_network

FIXTURES = Path(diversified_influence.__file__).parent / 'fixtures'


def fixture_path(name: str) -> Path:
    return FIXTURES / name


@pytest.fixture
def path_net():
    return load_network(fixture_path('path.txt'))


@pytest.fixture
def path_communities(path_net):
    return load_communities(fixture_path('path_communities.txt'), id_map=path_net.id_map)


@pytest.fixture
def overlap_dataset():
    return DataLoader(
        network=str(fixture_path('overlap.txt')),
        communities=str(fixture_path('overlap_communities.txt')),
        embeddings=str(fixture_path('overlap_embeddings.txt')),
    ).load()


@pytest.fixture
def two_clique_dataset():
    return DataLoader(
        network=str(fixture_path('two_clique.txt')),
        directed=False,
        communities=str(fixture_path('two_clique_communities.txt')),
        embeddings=str(fixture_path('two_clique_embeddings.txt')),
    ).load()


@pytest.fixture
def barbell_dataset():
    return DataLoader(
        network=str(fixture_path('barbell.txt')),
        communities=str(fixture_path('barbell_communities.txt')),
        attributes=str(fixture_path('barbell_attributes.txt')),
    ).load()
