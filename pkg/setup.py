from setuptools import find_packages, setup

from nestedcones import __version__


setup(
    name="django-nested-cones",
    version=__version__,
    packages=find_packages(exclude=("testproject", "testproject.*")),
    include_package_data=True,
    license="MIT License",
    description="Principal nested cones: size-and-shape analysis for Django projects",
    long_description=open("README.rst").read(),
    long_description_content_type="text/x-rst",
    install_requires=[
        "Django>=4.2.0",
        "djangorestframework>=3.10.0",
        "django-environ>=0.10.0",
        "attrs>=22.2.0",
        "numpy>=1.23",
        "scipy>=1.9",
        "pandas>=1.5",
    ],
    extras_require={
        "docs": [
            "sphinx >= 1.4",
            "sphinx_rtd_theme",
        ]
    },
    entry_points={
        "console_scripts": [
            "pnc = nestedcones.cli:main",
        ]
    },
    classifiers=[
        "Framework :: Django",
        "Framework :: Django :: 4.2",
        "Framework :: Django :: 5.0",
        "Framework :: Django :: 5.1",
        "Framework :: Django :: 5.2",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: 3.13",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
