import collabdiv


def test_version_valid():
    assert collabdiv.__version__
    assert collabdiv.__version__.count(".") == 2
